#include "ahprank/ahp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ahprank/errors.hpp"

namespace ahprank {

DeltaState::DeltaState(std::size_t m) : m_(m), upper_(m < 2 ? 0 : m * (m - 1) / 2, 0.0) {}

std::size_t DeltaState::index(std::size_t i, std::size_t j) const {
  // i < j, row-major over the strict upper triangle
  return i * m_ - i * (i + 1) / 2 + (j - i - 1);
}

double DeltaState::at(std::size_t i, std::size_t j) const {
  if (i >= m_ || j >= m_ || i == j) throw ArgumentError("delta index out of range");
  return i < j ? upper_[index(i, j)] : -upper_[index(j, i)];
}

void DeltaState::set(std::size_t i, std::size_t j, double value) {
  if (i >= m_ || j >= m_ || i == j) throw ArgumentError("delta index out of range");
  if (!(std::abs(value) <= 1.0)) throw ArgumentError("delta must lie in [-1,1]");
  if (i < j) upper_[index(i, j)] = value;
  else upper_[index(j, i)] = -value;
}

void DeltaState::absorb(std::span<const double> concordance) {
  if (concordance.size() != m_) throw ArgumentError("concordance vector has wrong length");
  const double l = static_cast<double>(l_);
  const double keep = l / (l + 1.0);
  const double take = 1.0 / (l + 1.0);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = i + 1; j < m_; ++j) {
      double& d = upper_[index(i, j)];
      d = keep * d + take * (concordance[i] - concordance[j]);
    }
  ++l_;
}

void DeltaState::reset() {
  std::fill(upper_.begin(), upper_.end(), 0.0);
  l_ = 0;
}

ComparisonMatrix::ComparisonMatrix(std::size_t m)
    : m_(m), upper_(m < 2 ? 0 : m * (m - 1) / 2) {}

double ComparisonMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  const bool swapped = i > j;
  if (swapped) std::swap(i, j);
  const Entry& e = upper_[i * m_ - i * (i + 1) / 2 + (j - i - 1)];
  const bool dominant = e.row_dominates != swapped;
  return dominant ? e.ratio : 1.0 / e.ratio;
}

void ComparisonMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= m_ || j >= m_ || i == j) throw ArgumentError("comparison index out of range");
  if (!(value > 0.0) || !std::isfinite(value))
    throw ArgumentError("comparison values must be positive and finite");
  const bool swapped = i > j;
  if (swapped) std::swap(i, j);
  Entry& e = upper_[i * m_ - i * (i + 1) / 2 + (j - i - 1)];
  // value is a(original i, original j)
  const bool first_dominates = value >= 1.0;
  e.ratio = first_dominates ? value : 1.0 / value;
  e.row_dominates = first_dominates != swapped;
}

ComparisonMatrix ComparisonMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  ComparisonMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) throw ArgumentError("comparison matrix must be square");
    if (rows[i][i] != 1.0) throw ArgumentError("comparison matrix diagonal must be 1");
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = rows[i][j];
      const double r = rows[j][i];
      if (!(v > 0.0) || !(r > 0.0)) throw ArgumentError("comparison entries must be positive");
      if (std::abs(v * r - 1.0) > 1e-9)
        throw ArgumentError("comparison matrix is not reciprocal at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
      // Keep whichever side is ≥ 1 exactly as given.
      if (v >= 1.0) a.set(i, j, v);
      else a.set(j, i, r);
    }
  return a;
}

std::vector<std::vector<double>> ComparisonMatrix::rows() const {
  std::vector<std::vector<double>> out(m_, std::vector<double>(m_));
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) throw ArgumentError("weight vector needs at least one criterion");
  return {std::vector<double>(m, 1.0 / static_cast<double>(m)), 0.0};
}

int scale_delta(double d) {
  if (!(std::abs(d) <= 1.0)) throw ArgumentError("delta must lie in [-1,1]");
  // The epsilon absorbs representation error such as 10·0.15 = 1.4999...
  const double magnitude = std::floor(10.0 * std::abs(d) + 0.5 + 1e-9);
  const int level = std::clamp(static_cast<int>(magnitude), 1, 9);
  return d < 0.0 ? -level : level;
}

ComparisonMatrix build_matrix(const DeltaState& state) {
  const std::size_t m = state.criteria();
  ComparisonMatrix a(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const int s = scale_delta(state.at(i, j));
      if (s > 0) a.set(i, j, static_cast<double>(s));
      else a.set(j, i, static_cast<double>(-s));
    }
  return a;
}

WeightVector evm_weights(const ComparisonMatrix& a, const EvmOptions& options) {
  const std::size_t m = a.size();
  if (m == 0) throw ArgumentError("empty comparison matrix");

  const auto dense = a.rows();
  auto multiply = [&](const std::vector<double>& x) {
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) y[i] += dense[i][j] * x[j];
    return y;
  };

  std::vector<double> x(m, 1.0 / static_cast<double>(m));
  bool converged = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    std::vector<double> y = multiply(x);
    double norm = 0.0;
    for (double v : y) norm += v;  // entries are positive, so this is the L1 norm
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] /= norm;
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x = std::move(y);
    if (diff < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError("power iteration did not converge in " +
                         std::to_string(options.max_iterations) + " iterations");

  const std::vector<double> ax = multiply(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    num += x[i] * ax[i];
    den += x[i] * x[i];
  }
  return {std::move(x), num / den};
}

double consistency_ratio(double lambda_max, std::size_t m) {
  // Saaty's random indices for m = 1..10.
  static constexpr std::array<double, 11> kRandomIndex = {0.0,  0.0,  0.0,  0.58, 0.90, 1.12,
                                                          1.24, 1.32, 1.41, 1.45, 1.49};
  if (m <= 2) return 0.0;
  const double ri = m < kRandomIndex.size() ? kRandomIndex[m] : kRandomIndex.back();
  const double ci = (lambda_max - static_cast<double>(m)) / static_cast<double>(m - 1);
  return ci / ri;
}

nlohmann::json to_json(const ComparisonMatrix& a) { return a.rows(); }

nlohmann::json to_json(const WeightVector& w) { return w.w; }

WeightVector weights_from_json(const nlohmann::json& j) {
  WeightVector w;
  if (j.is_array()) {
    w.w = j.get<std::vector<double>>();
  } else {
    w.w = j.at("weights").get<std::vector<double>>();
    w.lambda_max = j.value("lambda_max", 0.0);
  }
  double sum = 0.0;
  for (double v : w.w) {
    if (!(v > 0.0)) throw ArgumentError("weights must be positive");
    sum += v;
  }
  if (w.w.empty() || std::abs(sum - 1.0) > 1e-6) throw ArgumentError("weights must sum to 1");
  return w;
}

}  // namespace ahprank
