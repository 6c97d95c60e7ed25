#include "fairaudit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/error.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

namespace {

double parse_number(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataError("line " + std::to_string(line_no) + ": not a number: '" +
                    token + "'");
  }
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) fields.push_back(tok);
  return fields;
}

struct RawColumn {
  FeatureSpec spec;
  std::vector<double> numeric;
  std::vector<std::int32_t> codes;
};

std::int32_t level_index(const FeatureSpec& spec, const std::string& token,
                         std::size_t line_no) {
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    if (spec.levels[i] == token) return static_cast<std::int32_t>(i);
  }
  throw DataError("line " + std::to_string(line_no) + ": unknown code '" + token +
                  "' for " + spec.name);
}

}  // namespace

Dataset::Dataset(std::vector<FeatureSpec> specs,
                 std::vector<std::vector<double>> numeric_columns,
                 std::vector<std::vector<std::int32_t>> code_columns)
    : specs_(std::move(specs)),
      numeric_(std::move(numeric_columns)),
      codes_(std::move(code_columns)) {
  if (specs_.size() != numeric_.size() || specs_.size() != codes_.size()) {
    throw DataError("Dataset: column count mismatch");
  }
  bool found_target = false, found_protected = false;
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    const auto& col =
        specs_[c].kind == FeatureKind::Numeric ? numeric_[c].size() : codes_[c].size();
    if (c == 0) n_ = col;
    if (col != n_) throw DataError("Dataset: ragged columns");
    if (specs_[c].role == FeatureRole::Target) {
      if (found_target) throw DataError("Dataset: more than one target column");
      found_target = true;
      target_ = c;
    }
    if (specs_[c].role == FeatureRole::Protected) {
      if (found_protected) throw DataError("Dataset: more than one protected column");
      found_protected = true;
      protected_ = c;
    }
  }
  if (!found_target) throw DataError("Dataset: no target column");
  if (!found_protected) throw DataError("Dataset: no protected column");
  validate();
}

void Dataset::validate() const {
  if (n_ == 0) throw DataError("Dataset: no rows");
  std::set<std::string> names;
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    const FeatureSpec& s = specs_[c];
    if (!names.insert(s.name).second) {
      throw DataError("Dataset: duplicate column name " + s.name);
    }
    if (s.kind == FeatureKind::Categorical) {
      std::set<std::string> lv(s.levels.begin(), s.levels.end());
      if (lv.size() != s.levels.size() || s.levels.empty()) {
        throw DataError("Dataset: levels of " + s.name + " not unique and non-empty");
      }
      for (std::int32_t code : codes_[c]) {
        if (code < 0 || static_cast<std::size_t>(code) >= s.levels.size()) {
          throw DataError("Dataset: out-of-range level code in " + s.name);
        }
      }
    }
    if (s.role == FeatureRole::Target || s.role == FeatureRole::Protected) {
      if (s.kind != FeatureKind::Numeric) {
        throw DataError("Dataset: " + s.name + " must be a numeric 0/1 column");
      }
      for (double v : numeric_[c]) {
        if (v != 0.0 && v != 1.0) {
          throw DataError("Dataset: " + s.name + " contains values outside {0,1}");
        }
      }
    }
  }
}

std::size_t Dataset::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    if (specs_[c].name == name) return c;
  }
  throw DataError("Dataset: no column named " + name);
}

const std::vector<double>& Dataset::numeric_column(std::size_t col) const {
  if (specs_.at(col).kind != FeatureKind::Numeric) {
    throw DataError("Dataset: " + specs_[col].name + " is not numeric");
  }
  return numeric_[col];
}

const std::vector<std::int32_t>& Dataset::codes_column(std::size_t col) const {
  if (specs_.at(col).kind != FeatureKind::Categorical) {
    throw DataError("Dataset: " + specs_[col].name + " is not categorical");
  }
  return codes_[col];
}

std::vector<int> Dataset::target_values() const {
  std::vector<int> out(n_);
  const auto& col = numeric_[target_];
  for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<int>(col[i]);
  return out;
}

std::vector<int> Dataset::protected_values() const {
  std::vector<int> out(n_);
  const auto& col = numeric_[protected_];
  for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<int>(col[i]);
  return out;
}

const std::string& Dataset::level_of(std::size_t row, std::size_t col) const {
  const FeatureSpec& s = specs_.at(col);
  if (s.kind != FeatureKind::Categorical) {
    throw DataError("Dataset: " + s.name + " is not categorical");
  }
  return s.levels[static_cast<std::size_t>(codes_[col][row])];
}

int derive_gender(const std::string& personal_status_code) {
  if (personal_status_code == "A92" || personal_status_code == "A95") return 1;
  if (personal_status_code == "A91" || personal_status_code == "A93" ||
      personal_status_code == "A94") {
    return 0;
  }
  throw DataError("derive_gender: unknown personal-status code '" +
                  personal_status_code + "'");
}

Dataset load_german_credit(const std::string& path) {
  struct Field {
    const char* name;
    FeatureKind kind;
    FeatureRole role;
    std::vector<std::string> levels;
  };
  // 21 fields per record; the personal-status field is consumed by the
  // derived Gender column and the foreign-worker flag is kept but excluded
  // from the feature set.
  static const std::vector<Field> kFields = {
      {"AccountStatus", FeatureKind::Categorical, FeatureRole::Feature,
       {"A11", "A12", "A13", "A14"}},
      {"CreditDuration", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"CreditHistory", FeatureKind::Categorical, FeatureRole::Feature,
       {"A30", "A31", "A32", "A33", "A34"}},
      {"Purpose", FeatureKind::Categorical, FeatureRole::Feature,
       {"A40", "A41", "A42", "A43", "A44", "A45", "A46", "A48", "A49", "A410"}},
      {"CreditAmount", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"Savings", FeatureKind::Categorical, FeatureRole::Feature,
       {"A61", "A62", "A63", "A64", "A65"}},
      {"EmploymentDuration", FeatureKind::Categorical, FeatureRole::Feature,
       {"A71", "A72", "A73", "A74", "A75"}},
      {"InstallmentRate", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"Gender", FeatureKind::Numeric, FeatureRole::Protected, {}},
      {"Guarantor", FeatureKind::Categorical, FeatureRole::Feature,
       {"A101", "A102", "A103"}},
      {"ResidenceTime", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"Property", FeatureKind::Categorical, FeatureRole::Feature,
       {"A121", "A122", "A123", "A124"}},
      {"Age", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"OtherInstallmentPlan", FeatureKind::Categorical, FeatureRole::Feature,
       {"A141", "A142", "A143"}},
      {"Housing", FeatureKind::Categorical, FeatureRole::Feature,
       {"A151", "A152", "A153"}},
      {"NumberOfCredit", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"Job", FeatureKind::Categorical, FeatureRole::Feature,
       {"A171", "A172", "A173", "A174"}},
      {"NumberLiablePeople", FeatureKind::Numeric, FeatureRole::Feature, {}},
      {"Telephone", FeatureKind::Categorical, FeatureRole::Feature,
       {"A191", "A192"}},
      {"ForeignWorker", FeatureKind::Categorical, FeatureRole::Excluded,
       {"A201", "A202"}},
      {"CreditRisk", FeatureKind::Numeric, FeatureRole::Target, {}},
  };

  std::ifstream in(path);
  if (!in) throw DataError("load_german_credit: cannot open " + path);

  std::vector<FeatureSpec> specs;
  std::vector<std::vector<double>> numeric(kFields.size());
  std::vector<std::vector<std::int32_t>> codes(kFields.size());
  for (const Field& f : kFields) {
    specs.push_back({f.name, f.kind, f.role, f.levels});
  }
  const FeatureSpec personal_status{
      "PersonalStatus", FeatureKind::Categorical, FeatureRole::Excluded,
      {"A91", "A92", "A93", "A94", "A95"}};

  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != kFields.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(kFields.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < kFields.size(); ++c) {
      const std::string& tok = fields[c];
      if (specs[c].name == "Gender") {
        level_index(personal_status, tok, line_no);  // reject unknown codes
        numeric[c].push_back(static_cast<double>(derive_gender(tok)));
      } else if (specs[c].name == "CreditRisk") {
        if (tok == "1") {
          numeric[c].push_back(1.0);  // good type is the favorable outcome
        } else if (tok == "2") {
          numeric[c].push_back(0.0);
        } else {
          throw DataError("line " + std::to_string(line_no) +
                          ": unknown outcome code '" + tok + "'");
        }
      } else if (specs[c].kind == FeatureKind::Numeric) {
        numeric[c].push_back(parse_number(tok, line_no));
      } else {
        codes[c].push_back(level_index(specs[c], tok, line_no));
      }
    }
    ++rows;
  }
  if (rows == 0) throw DataError("load_german_credit: empty file " + path);
  return Dataset(std::move(specs), std::move(numeric), std::move(codes));
}

Dataset load_csv(const std::string& data_path, const std::string& schema_path) {
  std::ifstream schema_in(schema_path);
  if (!schema_in) throw DataError("load_csv: cannot open schema " + schema_path);
  nlohmann::json schema;
  try {
    schema_in >> schema;
  } catch (const std::exception& e) {
    throw DataError(std::string("load_csv: invalid schema JSON: ") + e.what());
  }
  if (!schema.contains("columns") || !schema["columns"].is_array()) {
    throw DataError("load_csv: schema has no 'columns' array");
  }

  std::vector<FeatureSpec> specs;
  for (const auto& col : schema["columns"]) {
    FeatureSpec s;
    s.name = col.at("name").get<std::string>();
    const std::string kind = col.at("kind").get<std::string>();
    if (kind == "numeric") {
      s.kind = FeatureKind::Numeric;
    } else if (kind == "categorical") {
      s.kind = FeatureKind::Categorical;
      s.levels = col.at("levels").get<std::vector<std::string>>();
    } else {
      throw DataError("load_csv: unknown kind '" + kind + "' for " + s.name);
    }
    const std::string role = col.value("role", "feature");
    if (role == "feature") {
      s.role = FeatureRole::Feature;
    } else if (role == "target") {
      s.role = FeatureRole::Target;
    } else if (role == "protected") {
      s.role = FeatureRole::Protected;
    } else if (role == "excluded") {
      s.role = FeatureRole::Excluded;
    } else {
      throw DataError("load_csv: unknown role '" + role + "' for " + s.name);
    }
    specs.push_back(std::move(s));
  }

  std::ifstream in(data_path);
  if (!in) throw DataError("load_csv: cannot open " + data_path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("load_csv: empty file " + data_path);

  auto split_csv = [](const std::string& l) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : l) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  };

  const std::vector<std::string> header = split_csv(line);
  if (header.size() != specs.size()) {
    throw DataError("load_csv: header has " + std::to_string(header.size()) +
                    " columns, schema declares " + std::to_string(specs.size()));
  }
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (header[c] != specs[c].name) {
      throw DataError("load_csv: header column '" + header[c] +
                      "' does not match schema column '" + specs[c].name + "'");
    }
  }

  std::vector<std::vector<double>> numeric(specs.size());
  std::vector<std::vector<std::int32_t>> codes(specs.size());
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != specs.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(specs.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < specs.size(); ++c) {
      if (fields[c].empty()) {
        throw DataError("line " + std::to_string(line_no) + ": empty cell in " +
                        specs[c].name);
      }
      if (specs[c].kind == FeatureKind::Numeric) {
        numeric[c].push_back(parse_number(fields[c], line_no));
      } else {
        codes[c].push_back(level_index(specs[c], fields[c], line_no));
      }
    }
    ++rows;
  }
  if (rows == 0) throw DataError("load_csv: no data rows in " + data_path);
  return Dataset(std::move(specs), std::move(numeric), std::move(codes));
}

std::size_t EncodedMatrix::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    if (column_names[c] == name) return c;
  }
  throw DataError("EncodedMatrix: no column named " + name);
}

EncodedMatrix EncodedMatrix::without_columns(
    const std::vector<std::size_t>& cols_to_drop) const {
  std::vector<bool> drop(cols, false);
  for (std::size_t c : cols_to_drop) drop.at(c) = true;
  std::vector<std::size_t> remap(cols, SIZE_MAX);
  EncodedMatrix out;
  out.rows = rows;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!drop[c]) {
      remap[c] = out.column_names.size();
      out.column_names.push_back(column_names[c]);
    }
  }
  out.cols = out.column_names.size();
  out.values.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (remap[c] != SIZE_MAX) out.at(r, remap[c]) = at(r, c);
    }
  }
  for (const auto& [feature, idx] : groups) {
    std::vector<std::size_t> kept;
    for (std::size_t c : idx) {
      if (remap[c] != SIZE_MAX) kept.push_back(remap[c]);
    }
    if (!kept.empty()) out.groups[feature] = std::move(kept);
  }
  if (protected_column && remap[*protected_column] != SIZE_MAX) {
    out.protected_column = remap[*protected_column];
  }
  return out;
}

EncodedMatrix one_hot_encode(const Dataset& d, bool include_protected) {
  EncodedMatrix m;
  m.rows = d.n();

  struct Source {
    std::size_t dataset_col;
    std::int32_t level;  // -1 for numeric copy
  };
  std::vector<Source> sources;

  for (std::size_t c = 0; c < d.column_count(); ++c) {
    const FeatureSpec& s = d.spec(c);
    if (s.role != FeatureRole::Feature) continue;
    if (s.kind == FeatureKind::Numeric) {
      m.groups[s.name].push_back(m.column_names.size());
      m.column_names.push_back(s.name);
      sources.push_back({c, -1});
    } else {
      for (std::size_t l = 0; l < s.levels.size(); ++l) {
        m.groups[s.name].push_back(m.column_names.size());
        m.column_names.push_back(s.name + "=" + s.levels[l]);
        sources.push_back({c, static_cast<std::int32_t>(l)});
      }
    }
  }
  if (include_protected) {
    const FeatureSpec& p = d.spec(d.protected_index());
    m.protected_column = m.column_names.size();
    m.groups[p.name].push_back(m.column_names.size());
    m.column_names.push_back(p.name);
    sources.push_back({d.protected_index(), -1});
  }

  m.cols = m.column_names.size();
  m.values.resize(m.rows * m.cols);
  for (std::size_t c = 0; c < sources.size(); ++c) {
    const Source& src = sources[c];
    if (src.level < 0) {
      const auto& col = d.numeric_column(src.dataset_col);
      for (std::size_t r = 0; r < m.rows; ++r) m.at(r, c) = col[r];
    } else {
      const auto& col = d.codes_column(src.dataset_col);
      for (std::size_t r = 0; r < m.rows; ++r) {
        m.at(r, c) = (col[r] == src.level) ? 1.0 : 0.0;
      }
    }
  }
  return m;
}

std::int32_t decode_one_hot(const EncodedMatrix& m, std::size_t row,
                            const std::string& feature) {
  const auto it = m.groups.find(feature);
  if (it == m.groups.end()) throw DataError("decode_one_hot: no feature " + feature);
  std::int32_t found = -1;
  for (std::size_t l = 0; l < it->second.size(); ++l) {
    if (m.at(row, it->second[l]) == 1.0) {
      if (found >= 0) throw DataError("decode_one_hot: block of " + feature +
                                      " has several active levels");
      found = static_cast<std::int32_t>(l);
    }
  }
  if (found < 0) throw DataError("decode_one_hot: block of " + feature +
                                 " has no active level");
  return found;
}

void Standardization::apply_row(std::span<double> row) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    row[columns[i]] = (row[columns[i]] - mean[i]) / stddev[i];
  }
}

std::pair<EncodedMatrix, Standardization> standardize(
    const EncodedMatrix& m, const std::vector<std::size_t>& columns) {
  if (m.rows < 2) throw DataError("standardize: need at least two rows");
  EncodedMatrix out = m;
  Standardization params;
  params.columns = columns;
  for (std::size_t c : columns) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) mean += m.at(r, c);
    mean /= static_cast<double>(m.rows);
    double var = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      const double diff = m.at(r, c) - mean;
      var += diff * diff;
    }
    // Corrected (n-1) divisor: a symmetric three-point column maps onto
    // exactly {-1, 0, 1}.
    var /= static_cast<double>(m.rows - 1);
    const double sd = std::sqrt(var);
    if (sd == 0.0) {
      throw DataError("standardize: zero-variance column " + m.column_names.at(c));
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
      out.at(r, c) = (m.at(r, c) - mean) / sd;
    }
    params.mean.push_back(mean);
    params.stddev.push_back(sd);
  }
  return {std::move(out), std::move(params)};
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed) {
  if (k < 2 || k > n) throw DomainError("kfold_indices: need 2 <= k <= n");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + pos, perm.begin() + pos + size);
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

}  // namespace fairaudit
