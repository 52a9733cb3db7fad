#include "ahprank/learner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "ahprank/errors.hpp"

namespace ahprank {

void LearnerConfig::validate() const {
  if (theta < 2) throw ArgumentError("theta must be at least 2");
  if (iterations < 1) throw ArgumentError("the number of iterations T must be at least 1");
}

std::vector<RankAssignment> measure_rankings(std::span<const PatternRecord* const> patterns) {
  if (patterns.empty()) throw ArgumentError("no patterns to rank");
  const std::size_t m = patterns.front()->measures.size();
  std::vector<RankAssignment> out;
  out.reserve(m);
  std::vector<Scored> scores(patterns.size());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < patterns.size(); ++i)
      scores[i] = {patterns[i]->id, patterns[i]->measures.at(k)};
    out.push_back(rank_by(scores));
  }
  return out;
}

std::vector<double> measure_concordance(const FeedbackRanking& user,
                                        std::span<const RankAssignment> measure_ranks) {
  if (user.size() < 2) throw ArgumentError("a ranking needs at least two patterns");
  const RankAssignment user_rank = RankAssignment::from_order(user.order);
  std::vector<double> k;
  k.reserve(measure_ranks.size());
  for (const auto& ranks : measure_ranks) {
    // Re-rank within the user's set so Kendall's W is taken over |S|.
    const RankAssignment within =
        ranks.size() == user.size() ? ranks : ranks.restricted_to(user.order);
    k.push_back(kendall_w(within, user_rank));
  }
  return k;
}

WeightVector learn_weights(DeltaState& state, const FeedbackRanking& ranking,
                           std::span<const RankAssignment> measure_ranks) {
  if (measure_ranks.size() != state.criteria())
    throw ArgumentError("one measure ranking per criterion is required");
  state.absorb(measure_concordance(ranking, measure_ranks));
  return evm_weights(build_matrix(state));
}

WeightVector learn_weights(DeltaState& state, const FeedbackRanking& ranking,
                           std::span<const PatternRecord* const> ranked) {
  validate_ranking(ranking, ranked);
  return learn_weights(state, ranking, measure_rankings(ranked));
}

double score_gw(const PatternRecord& p, const WeightVector& w) {
  if (p.scaled.size() != w.size())
    throw ArgumentError("weight vector and pattern measures differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * p.scaled[i];
  return s;
}

double sigma(const PatternRecord& p1, const PatternRecord& p2, const WeightVector& w) {
  const double gap = score_gw(p1, w) - score_gw(p2, w);
  double spread = 0.0;
  for (std::size_t l = 0; l < p1.scaled.size(); ++l) spread += p1.scaled[l] - p2.scaled[l];
  if (spread == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(gap / spread);
}

std::vector<const PatternRecord*> sort_by_score(std::span<const PatternRecord* const> patterns,
                                                const WeightVector& w) {
  std::vector<std::pair<double, const PatternRecord*>> keyed;
  keyed.reserve(patterns.size());
  for (const PatternRecord* p : patterns) keyed.emplace_back(score_gw(*p, w), p);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id < b.second->id;
  });
  std::vector<const PatternRecord*> out;
  out.reserve(keyed.size());
  for (const auto& [score, p] : keyed) out.push_back(p);
  return out;
}

RankAssignment rank_by_score(std::span<const PatternRecord* const> patterns,
                             const WeightVector& w) {
  std::vector<Scored> scores;
  scores.reserve(patterns.size());
  for (const PatternRecord* p : patterns) scores.push_back({p->id, score_gw(*p, w)});
  return rank_by(scores);
}

std::pair<PatternId, PatternId> select_query(std::span<const PatternRecord* const> sample,
                                             const WeightVector& w) {
  if (sample.size() < 2) throw ArgumentError("query selection needs at least two patterns");
  const auto sorted = sort_by_score(sample, w);
  std::size_t best = 0;
  double best_sigma = sigma(*sorted[0], *sorted[1], w);
  for (std::size_t i = 1; i + 1 < sorted.size(); ++i) {
    const double s = sigma(*sorted[i], *sorted[i + 1], w);
    if (s < best_sigma) {
      best_sigma = s;
      best = i;
    }
  }
  return {sorted[best]->id, sorted[best + 1]->id};
}

std::vector<const PatternRecord*> sample_patterns(std::span<const PatternRecord> collection,
                                                  std::size_t theta, Rng& rng) {
  if (collection.empty()) throw ArgumentError("cannot sample from an empty collection");
  if (theta < 2) throw ArgumentError("theta must be at least 2");
  const std::size_t n = collection.size();

  std::vector<const PatternRecord*> out;
  if (theta >= n) {
    out = pointers(collection);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
  }
  // Floyd's algorithm: theta distinct indices in O(theta) draws.
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(theta * 2);
  out.reserve(theta);
  for (std::size_t j = n - theta; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    const std::size_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(&collection[pick]);
  }
  return out;
}

PassiveResult run_passive(std::span<const FeedbackRanking> rankings,
                          const PatternCollection& collection) {
  if (rankings.empty()) throw ArgumentError("passive learning needs at least one ranking");
  PassiveResult result{WeightVector::uniform(collection.criteria()), {},
                       DeltaState(collection.criteria())};
  for (std::size_t k = 0; k < rankings.size(); ++k) {
    try {
      const auto ranked = collection.resolve(rankings[k].order);
      result.weights = learn_weights(result.delta, rankings[k], ranked);
    } catch (const ArgumentError& e) {
      throw ArgumentError("ranking " + std::to_string(k) + ": " + e.what());
    }
    result.trace.push_back(result.weights);
  }
  return result;
}

ActiveLearner::ActiveLearner(std::span<const PatternRecord> pool, std::size_t criteria,
                             LearnerConfig config)
    : pool_(pool),
      config_(config),
      rng_(config.seed),
      delta_(criteria),
      weights_(WeightVector::uniform(criteria)) {
  config_.validate();
  if (pool_.size() < 2) throw ArgumentError("active learning needs at least two patterns");
}

std::pair<const PatternRecord*, const PatternRecord*> ActiveLearner::propose() {
  if (config_.strategy == QueryStrategy::Random) {
    const std::size_t n = pool_.size();
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng_);
    if (b >= a) ++b;
    pending_ = {&pool_[a], &pool_[b]};
    return pending_;
  }
  const auto sample = sample_patterns(pool_, config_.theta, rng_);
  const auto [first, second] = select_query(sample, weights_);
  const PatternRecord* p = nullptr;
  const PatternRecord* q = nullptr;
  for (const PatternRecord* r : sample) {
    if (r->id == first) p = r;
    if (r->id == second) q = r;
  }
  pending_ = {p, q};
  return pending_;
}

const WeightVector& ActiveLearner::absorb(const FeedbackRanking& answer) {
  if (!has_pending()) throw ArgumentError("no query is outstanding");
  const std::array<const PatternRecord*, 2> presented = {pending_.first, pending_.second};
  validate_ranking(answer, presented);
  std::array<const PatternRecord*, 2> ranked = presented;
  if (answer.order.front() != ranked[0]->id) std::swap(ranked[0], ranked[1]);
  weights_ = learn_weights(delta_, answer, ranked);
  pending_ = {nullptr, nullptr};
  return weights_;
}

ActiveResult run_active(FeedbackOracle& oracle, std::span<const PatternRecord> pool,
                        std::size_t criteria, const LearnerConfig& config,
                        const StepObserver& observer) {
  using Clock = std::chrono::steady_clock;
  ActiveLearner learner(pool, criteria, config);
  ActiveResult result{learner.weights(), {}, false};

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const auto started = Clock::now();
    const auto [a, b] = learner.propose();
    const double select_seconds = std::chrono::duration<double>(Clock::now() - started).count();

    const std::array<const PatternRecord*, 2> presented = {a, b};
    auto response = oracle.rank(presented);
    if (!response) {
      result.aborted = true;
      break;
    }

    const auto learn_started = Clock::now();
    learner.absorb(*response);
    const double learn_seconds =
        std::chrono::duration<double>(Clock::now() - learn_started).count();

    ActiveStep step{t, {a->id, b->id}, std::move(*response), learner.weights(),
                    select_seconds + learn_seconds};
    if (observer) observer(step);
    result.trace.push_back(std::move(step));
  }
  result.weights = learner.weights();
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const ActiveStep> trace,
                     std::span<const std::string> measure_names) {
  const auto saved_precision = out.precision(12);
  out << "iteration";
  for (const auto& name : measure_names) out << ",w_" << name;
  out << ",query_a,query_b,response\n";
  for (const auto& step : trace) {
    out << step.iteration;
    for (double w : step.weights.w) out << ',' << w;
    out << ',' << step.query.first << ',' << step.query.second << ',';
    for (std::size_t i = 0; i < step.response.order.size(); ++i)
      out << (i ? "|" : "") << step.response.order[i];
    out << '\n';
  }
  out.precision(saved_precision);
}

}  // namespace ahprank
