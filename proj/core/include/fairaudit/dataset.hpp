#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairaudit {

enum class FeatureKind { Categorical, Numeric };
enum class FeatureRole { Feature, Target, Protected, Excluded };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  FeatureRole role = FeatureRole::Feature;
  std::vector<std::string> levels;  // categorical only, unique, non-empty
};

/// Immutable typed table. Column-major: categorical cells are level indices
/// into the column's declared levels, numeric cells are doubles. Target and
/// protected columns hold only {0, 1}. Row order is preserved by every
/// operation in the library so that predictions, outcomes and group
/// membership stay aligned by index.
class Dataset {
 public:
  Dataset(std::vector<FeatureSpec> specs,
          std::vector<std::vector<double>> numeric_columns,
          std::vector<std::vector<std::int32_t>> code_columns);

  std::size_t n() const { return n_; }
  std::size_t column_count() const { return specs_.size(); }
  const std::vector<FeatureSpec>& specs() const { return specs_; }
  const FeatureSpec& spec(std::size_t col) const { return specs_.at(col); }
  std::size_t column_index(const std::string& name) const;

  const std::vector<double>& numeric_column(std::size_t col) const;
  const std::vector<std::int32_t>& codes_column(std::size_t col) const;

  std::size_t target_index() const { return target_; }
  std::size_t protected_index() const { return protected_; }
  std::vector<int> target_values() const;
  std::vector<int> protected_values() const;

  /// Level string of a categorical cell.
  const std::string& level_of(std::size_t row, std::size_t col) const;

 private:
  void validate() const;

  std::vector<FeatureSpec> specs_;
  std::vector<std::vector<double>> numeric_;
  std::vector<std::vector<std::int32_t>> codes_;
  std::size_t n_ = 0;
  std::size_t target_ = 0;
  std::size_t protected_ = 0;
};

/// Gender bit for the combined personal-status codes: 1 for the female codes
/// (A92, A95), 0 for the male codes (A91, A93, A94). Unknown codes are errors.
int derive_gender(const std::string& personal_status_code);

/// Reads the whitespace-separated 21-field consumer-loan file. The outcome
/// column is remapped so the good type is 1, the personal-status column is
/// replaced by the derived binary Gender column (role protected), and the
/// foreign-worker column is excluded from the feature set.
Dataset load_german_credit(const std::string& path);

/// Generic CSV ingestion: header row plus a JSON sidecar schema listing
/// per-column kind / role / levels.
Dataset load_csv(const std::string& data_path, const std::string& schema_path);

/// Model-ready numeric matrix. Numeric features are copied, categorical
/// features expand to one 0/1 column per declared level (block sums to 1 per
/// row), excluded features are omitted, and the protected column is appended
/// last when requested.
struct EncodedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> column_names;
  /// Original feature name -> indices of its encoded columns.
  std::map<std::string, std::vector<std::size_t>> groups;
  std::optional<std::size_t> protected_column;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
  std::size_t column_index(const std::string& name) const;

  /// Drops the given columns, preserving order of the rest.
  EncodedMatrix without_columns(const std::vector<std::size_t>& cols_to_drop) const;
};

EncodedMatrix one_hot_encode(const Dataset& d, bool include_protected);

/// Decodes a one-hot block back to its level index; the inverse of encoding.
std::int32_t decode_one_hot(const EncodedMatrix& m, std::size_t row,
                            const std::string& feature);

struct Standardization {
  std::vector<std::size_t> columns;
  std::vector<double> mean;
  std::vector<double> stddev;

  void apply_row(std::span<double> row) const;
};

/// Centers and scales the selected columns to mean 0 and corrected sample
/// standard deviation 1 (divisor n-1). Returns the transformed copy together
/// with the parameters for reuse at prediction time. Zero-variance columns
/// are errors.
std::pair<EncodedMatrix, Standardization> standardize(
    const EncodedMatrix& m, const std::vector<std::size_t>& columns);

/// k disjoint index sets partitioning 0..n-1 with sizes differing by at most
/// one, deterministic in the seed. Each fold is sorted ascending.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);

}  // namespace fairaudit
