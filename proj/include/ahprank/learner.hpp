#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ahprank/ahp.hpp"
#include "ahprank/pattern.hpp"

namespace ahprank {

using Rng = std::mt19937_64;

enum class QueryStrategy {
  Sensitivity,  // adjacent pair of minimal σ in a θ-sample
  Random,       // uniformly random pair from the whole pool
};

struct LearnerConfig {
  std::size_t theta = 1000;
  std::size_t iterations = 20;  // T
  std::uint64_t seed = 0;
  QueryStrategy strategy = QueryStrategy::Sensitivity;

  /// Throws ArgumentError unless theta ≥ 2 and T ≥ 1.
  void validate() const;
};

/// Kendall's W of every measure's ranking against `user` (both restricted
/// to the ranked patterns). Measure ties break by pattern id.
std::vector<double> measure_concordance(const FeedbackRanking& user,
                                        std::span<const RankAssignment> measure_ranks);

/// Per-measure rankings of the given patterns on raw measure values.
std::vector<RankAssignment> measure_rankings(std::span<const PatternRecord* const> patterns);

/// Absorbs one user ranking into `state` and returns the refreshed weights.
WeightVector learn_weights(DeltaState& state, const FeedbackRanking& ranking,
                           std::span<const RankAssignment> measure_ranks);

/// Convenience overload deriving measure ranks from the ranked records.
WeightVector learn_weights(DeltaState& state, const FeedbackRanking& ranking,
                           std::span<const PatternRecord* const> ranked);

/// g_w(P) = Σ w_i · scaled_i(P).
double score_gw(const PatternRecord& p, const WeightVector& w);

/// |g_w(P1) − g_w(P2)| / |Σ_l (M_l(P1) − M_l(P2))| on the values g_w sees.
/// 0/0 is 0 and x/0 is +∞.
double sigma(const PatternRecord& p1, const PatternRecord& p2, const WeightVector& w);

/// Patterns sorted by descending g_w, ties by ascending id.
std::vector<const PatternRecord*> sort_by_score(std::span<const PatternRecord* const> patterns,
                                                const WeightVector& w);

/// Adjacent pair (in descending g_w order) with the smallest σ; the first
/// such pair in scan order wins ties.
std::pair<PatternId, PatternId> select_query(std::span<const PatternRecord* const> sample,
                                             const WeightVector& w);

/// min(theta, n) distinct records drawn uniformly without replacement.
std::vector<const PatternRecord*> sample_patterns(std::span<const PatternRecord> collection,
                                                  std::size_t theta, Rng& rng);

RankAssignment rank_by_score(std::span<const PatternRecord* const> patterns,
                             const WeightVector& w);

struct PassiveResult {
  WeightVector weights;
  std::vector<WeightVector> trace;  // after each ranking
  DeltaState delta;
};

/// Passive mode: Δ starts at zero and absorbs each ranking in order.
PassiveResult run_passive(std::span<const FeedbackRanking> rankings,
                          const PatternCollection& collection);

struct ActiveStep {
  std::size_t iteration = 0;  // t, 1-based
  std::pair<PatternId, PatternId> query;
  FeedbackRanking response;
  WeightVector weights;      // w^t
  double select_seconds = 0;  // learner time from answer to next query
};

/// Incremental active-mode engine. Each `propose` consumes randomness; each
/// `absorb` applies one answer to the outstanding query.
class ActiveLearner {
 public:
  ActiveLearner(std::span<const PatternRecord> pool, std::size_t criteria, LearnerConfig config);

  std::pair<const PatternRecord*, const PatternRecord*> propose();
  const WeightVector& absorb(const FeedbackRanking& answer);

  const WeightVector& weights() const noexcept { return weights_; }
  const DeltaState& delta() const noexcept { return delta_; }
  std::size_t iteration() const noexcept { return delta_.observations(); }
  const LearnerConfig& config() const noexcept { return config_; }
  bool has_pending() const noexcept { return pending_.first != nullptr; }
  std::pair<const PatternRecord*, const PatternRecord*> pending() const noexcept {
    return pending_;
  }

 private:
  std::span<const PatternRecord> pool_;
  LearnerConfig config_;
  Rng rng_;
  DeltaState delta_;
  WeightVector weights_;
  std::pair<const PatternRecord*, const PatternRecord*> pending_{nullptr, nullptr};
};

struct ActiveResult {
  WeightVector weights;
  std::vector<ActiveStep> trace;
  bool aborted = false;
};

/// Called after every iteration with the step just completed.
using StepObserver = std::function<void(const ActiveStep&)>;

/// Active mode over `pool`: w⁰ uniform, then T rounds of
/// sample → select → ask → learn.
ActiveResult run_active(FeedbackOracle& oracle, std::span<const PatternRecord> pool,
                        std::size_t criteria, const LearnerConfig& config,
                        const StepObserver& observer = {});

/// iteration,w_1..w_m,query_a,query_b,response
void write_trace_csv(std::ostream& out, std::span<const ActiveStep> trace,
                     std::span<const std::string> measure_names);

}  // namespace ahprank
