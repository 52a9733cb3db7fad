#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace ahprank {

/// Running averages of pairwise Kendall gaps Δ(i,j) = K_i − K_j for i < j,
/// plus the number of rankings absorbed so far.
class DeltaState {
 public:
  explicit DeltaState(std::size_t m = 0);

  std::size_t criteria() const noexcept { return m_; }
  std::size_t observations() const noexcept { return l_; }

  /// Signed gap for any i != j; the lower triangle is the negated upper one.
  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  /// Folds one ranking's per-criterion concordances into the running mean:
  /// Δ ← l/(l+1)·Δ + 1/(l+1)·(K_i − K_j), then l ← l+1.
  void absorb(std::span<const double> concordance);

  void reset();

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t m_ = 0;
  std::size_t l_ = 0;
  std::vector<double> upper_;  // row-major strict upper triangle
};

/// Positive reciprocal matrix. Only the upper triangle is stored, as a
/// dominance ratio r ≥ 1 and a direction; reciprocal entries are derived,
/// so a(i,j)·a(j,i) is a product of a value and its own reciprocal.
class ComparisonMatrix {
 public:
  explicit ComparisonMatrix(std::size_t m = 0);

  /// From a full matrix; checks positivity, unit diagonal and reciprocity
  /// to 1e-9 relative.
  static ComparisonMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const;

  /// Sets a(i,j) = value and a(j,i) = 1/value.
  void set(std::size_t i, std::size_t j, double value);

  std::vector<std::vector<double>> rows() const;

 private:
  struct Entry {
    double ratio = 1.0;
    bool row_dominates = true;  // a(i,j) = ratio when true, else 1/ratio
  };
  std::size_t m_ = 0;
  std::vector<Entry> upper_;
};

struct WeightVector {
  std::vector<double> w;
  /// Principal eigenvalue of the matrix the weights came from; 0 when the
  /// weights were not produced by eigen-extraction.
  double lambda_max = 0.0;

  std::size_t size() const noexcept { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }

  static WeightVector uniform(std::size_t m);
};

/// Maps a gap in [−1,1] to a signed 1..9 judgment:
/// sign(d)·clamp(round_half_up(10|d|), 1, 9), with 0 → +1.
int scale_delta(double d);

ComparisonMatrix build_matrix(const DeltaState& state);

struct EvmOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 10'000;
};

/// Normalized principal eigenvector by power iteration; λ_max by Rayleigh
/// quotient at convergence.
WeightVector evm_weights(const ComparisonMatrix& a, const EvmOptions& options = {});

/// Saaty consistency ratio CI/RI, 0 for m ≤ 2. Diagnostic only.
double consistency_ratio(double lambda_max, std::size_t m);

nlohmann::json to_json(const ComparisonMatrix& a);
nlohmann::json to_json(const WeightVector& w);
WeightVector weights_from_json(const nlohmann::json& j);

}  // namespace ahprank
