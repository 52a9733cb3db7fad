#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ahprank/learner.hpp"
#include "ahprank/oracles.hpp"

namespace ahprank {

enum class LearningMode { Passive, Active };

struct ExperimentConfig {
  /// FIMI file path, or "synthetic:<transactions>:<items>" for a generated
  /// transaction database, or "measures:<patterns>" for patterns with
  /// independent uniform measure values (no rules; chi is unavailable).
  std::string dataset;
  double minsup = 0.05;  // relative; converted by ceiling
  double minconf = 0.0;
  std::size_t max_head = 2;
  std::vector<MeasureId> measures{kAllMeasures.begin(), kAllMeasures.end()};
  LearningMode mode = LearningMode::Active;
  nlohmann::json emulator = {{"kind", "rand"}};
  std::size_t folds = 5;
  double training_fraction = 0.2;
  /// Active mode: fraction of patterns held out of the query pool and used
  /// for evaluation. 0 evaluates on the whole collection.
  double holdout = 0.0;
  std::size_t theta = 1000;
  std::size_t iterations = 20;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  std::optional<double> err;
  std::optional<std::size_t> swap_after;
  /// Target after the swap point; required when swap_after is set.
  nlohmann::json swap_to = {{"kind", "rand"}};
  QueryStrategy strategy = QueryStrategy::Sensitivity;
  std::string output;  // path prefix for reports; empty = no files

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// A loaded experiment corpus: patterns plus the database they came from.
struct Corpus {
  std::shared_ptr<const TransactionDB> db;  // null for measure-only data
  PatternCollection patterns;
};

/// Independent uniform [0,1] measure values; ids 0..n-1.
PatternCollection synthetic_collection(std::size_t n, std::size_t criteria, std::uint64_t seed);

/// Transactions with planted co-occurring item groups over a background of
/// independent items.
TransactionDB synthetic_transactions(std::size_t n_transactions, std::size_t n_items,
                                     std::uint64_t seed);

/// Transaction source named by `config.dataset`; rejects "measures:".
std::shared_ptr<const TransactionDB> load_transactions(const ExperimentConfig& config);

/// Rules under the configured support, confidence and head limits.
std::vector<MinedRule> mine_rules(const TransactionDB& db, const ExperimentConfig& config);

Corpus load_corpus(const ExperimentConfig& config);

/// Builds the configured feedback source for one run.
std::unique_ptr<FeedbackOracle> make_experiment_oracle(const ExperimentConfig& config,
                                                       const Corpus& corpus,
                                                       std::uint64_t run_seed);

struct RankMetrics {
  double rho = 0.0;
  double recall10 = 0.0;  // R@10%
  double recall1 = 0.0;   // R@1%
};

/// Learned g_w ranking against the oracle's target ranking.
RankMetrics evaluate(std::span<const PatternRecord* const> patterns, const WeightVector& w,
                     const FeedbackOracle& oracle);

struct AuditReport {
  std::vector<std::string> measure_names;
  std::vector<double> rho;  // per measure
  double vbm = 0.0;         // best single measure

  nlohmann::json to_json() const;
};

AuditReport run_measure_audit(const PatternCollection& patterns, const FeedbackOracle& oracle);
AuditReport run_measure_audit(const ExperimentConfig& config);

struct RunMetrics {
  std::size_t run = 0;
  RankMetrics metrics;
  double learn_seconds = 0.0;
  double mean_latency = 0.0;  // active only
  double max_latency = 0.0;   // active only
  std::vector<double> weights;
};

struct CurvePoint {
  std::size_t run = 0;
  std::size_t iteration = 0;
  RankMetrics metrics;
  double latency = 0.0;
};

struct MetricsReport {
  std::vector<std::string> measure_names;
  std::vector<RunMetrics> runs;
  RankMetrics mean;
  double mean_learn_seconds = 0.0;
  double mean_latency = 0.0;
  double max_latency = 0.0;
  std::vector<CurvePoint> curve;  // active only, every run and iteration

  /// Mean metrics at each iteration over runs.
  std::vector<RankMetrics> mean_curve() const;

  nlohmann::json to_json() const;
  void write_curve_csv(std::ostream& out) const;
};

/// Random training split per fold: the emulator ranks the training rules
/// once, passive learning runs on that single ranking, metrics come from the
/// held-out rules. `same_split` evaluates on the training rules instead.
MetricsReport run_passive_cv(const ExperimentConfig& config, const Corpus& corpus,
                             bool same_split = false);
MetricsReport run_passive_cv(const ExperimentConfig& config);

MetricsReport run_active_experiment(const ExperimentConfig& config, const Corpus& corpus);
MetricsReport run_active_experiment(const ExperimentConfig& config);

/// Writes <prefix>.json (summary) and, when curves exist, <prefix>.csv.
void write_report_files(const std::string& prefix, const nlohmann::json& summary,
                        const MetricsReport* report);

}  // namespace ahprank
