#include <algorithm>
#include <cmath>
#include <vector>

#include "fairaudit/error.hpp"
#include "fairaudit/models.hpp"

namespace fairaudit {

namespace {

double log1pexp(double m) {
  return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double sigmoid(double m) {
  if (m >= 0.0) {
    return 1.0 / (1.0 + std::exp(-m));
  }
  const double e = std::exp(m);
  return e / (1.0 + e);
}

/// Solves A x = b for symmetric positive semi-definite A by Cholesky with a
/// small diagonal jitter; A is overwritten. Dimensions here are tiny.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b,
                              std::size_t p) {
  double trace = 0.0;
  for (std::size_t i = 0; i < p; ++i) trace += a[i * p + i];
  const double jitter = std::max(1e-10 * trace / static_cast<double>(p), 1e-12);
  for (std::size_t i = 0; i < p; ++i) a[i * p + i] += jitter;

  // In-place lower Cholesky.
  for (std::size_t j = 0; j < p; ++j) {
    double d = a[j * p + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * p + k] * a[j * p + k];
    if (d <= 0.0) d = 1e-12;
    a[j * p + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
      a[i * p + j] = s / a[j * p + j];
    }
  }
  // Forward then backward substitution.
  for (std::size_t i = 0; i < p; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * p + k] * b[k];
    b[i] = s / a[i * p + i];
  }
  for (std::size_t ii = p; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double s = b[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= a[k * p + i] * b[k];
    b[i] = s / a[i * p + i];
  }
  return b;
}

}  // namespace

double LogisticModel::predict_proba(std::span<const double> row) const {
  double m = intercept;
  if (standardization.columns.empty()) {
    for (std::size_t j = 0; j < weights.size(); ++j) m += weights[j] * row[j];
  } else {
    std::vector<double> z(row.begin(), row.end());
    standardization.apply_row(z);
    for (std::size_t j = 0; j < weights.size(); ++j) m += weights[j] * z[j];
  }
  return sigmoid(m);
}

std::vector<std::size_t> LogisticModel::columns_used() const {
  std::vector<std::size_t> all(weights.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return all;
}

LogisticModel train_logistic(const EncodedMatrix& x, std::span<const int> y,
                             double lambda, double tol, int max_iter) {
  if (x.rows != y.size()) throw DataError("train_logistic: shape mismatch");
  if (lambda < 0.0) throw DomainError("train_logistic: lambda must be >= 0");
  const std::size_t n = x.rows;
  const std::size_t p = x.cols;

  // Standardize every non-constant column; the transform travels with the
  // model so prediction-time rows go through the same scaling.
  Standardization st;
  std::vector<double> z(x.values);
  for (std::size_t c = 0; c < p; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x.at(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double diff = x.at(r, c) - mean;
      var += diff * diff;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 0.0) {
      st.columns.push_back(c);
      st.mean.push_back(mean);
      st.stddev.push_back(sd);
      for (std::size_t r = 0; r < n; ++r) {
        z[r * p + c] = (x.at(r, c) - mean) / sd;
      }
    }
  }

  std::vector<double> beta(p + 1, 0.0);  // beta[p] is the intercept
  std::vector<double> margin(n, 0.0), prob(n, 0.0);

  auto objective = [&](const std::vector<double>& b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = b[p];
      const double* zi = z.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) m += b[j] * zi[j];
      f += log1pexp(m) - (y[i] ? m : 0.0);
    }
    f /= static_cast<double>(n);
    double reg = 0.0;
    for (std::size_t j = 0; j < p; ++j) reg += b[j] * b[j];
    return f + 0.5 * lambda * reg;
  };

  LogisticModel model;
  model.lambda = lambda;
  model.columns = x.column_names;
  model.standardization = st;

  double f_cur = objective(beta);
  std::vector<double> grad(p + 1), step, trial(p + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double m = beta[p];
      const double* zi = z.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) m += beta[j] * zi[j];
      margin[i] = m;
      prob[i] = sigmoid(m);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double resid = prob[i] - (y[i] ? 1.0 : 0.0);
      const double* zi = z.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) grad[j] += resid * zi[j];
      grad[p] += resid;
    }
    for (std::size_t j = 0; j <= p; ++j) grad[j] /= static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j) grad[j] += lambda * beta[j];

    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    model.iterations = iter;
    if (gmax <= tol) {
      model.converged = true;
      break;
    }

    // Newton system: (Z'WZ/n + lambda I) step = -grad, intercept unpenalized.
    const std::size_t q = p + 1;
    std::vector<double> hess(q * q, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::max(prob[i] * (1.0 - prob[i]), 1e-10);
      const double* zi = z.data() + i * p;
      for (std::size_t a = 0; a < p; ++a) {
        const double wza = w * zi[a];
        for (std::size_t b = a; b < p; ++b) hess[a * q + b] += wza * zi[b];
        hess[a * q + p] += wza;
      }
      hess[p * q + p] += w;
    }
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t b = a; b < q; ++b) {
        hess[a * q + b] /= static_cast<double>(n);
        hess[b * q + a] = hess[a * q + b];
      }
    }
    for (std::size_t j = 0; j < p; ++j) hess[j * q + j] += lambda;

    std::vector<double> rhs(q);
    for (std::size_t j = 0; j < q; ++j) rhs[j] = -grad[j];
    step = solve_spd(std::move(hess), std::move(rhs), q);

    double dir_deriv = 0.0;
    for (std::size_t j = 0; j < q; ++j) dir_deriv += grad[j] * step[j];
    if (dir_deriv > 0.0) {
      for (std::size_t j = 0; j < q; ++j) step[j] = -grad[j];
      dir_deriv = 0.0;
      for (std::size_t j = 0; j < q; ++j) dir_deriv += grad[j] * step[j];
    }

    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t j = 0; j < q; ++j) trial[j] = beta[j] + t * step[j];
      const double f_trial = objective(trial);
      if (f_trial <= f_cur + 1e-4 * t * dir_deriv) {
        beta = trial;
        f_cur = f_trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;  // no further progress representable
  }

  model.weights.assign(beta.begin(), beta.begin() + static_cast<long>(p));
  model.intercept = beta[p];
  return model;
}

}  // namespace fairaudit
