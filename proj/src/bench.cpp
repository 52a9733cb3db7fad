#include "ahprank/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "ahprank/errors.hpp"

namespace ahprank {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

// Streams keep learner, emulator and split randomness independent.
enum Stream : std::uint64_t { kSplit = 1, kLearner = 2, kEmulator = 3, kMistakes = 4, kSwap = 5 };

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fills in per-run seeds an emulator description leaves open.
nlohmann::json seeded(nlohmann::json spec, std::uint64_t seed) {
  const std::string kind = spec.value("kind", "");
  if ((kind == "rand" || kind == "lex") && !spec.contains("seed") && !spec.contains("weights") &&
      !spec.contains("order"))
    spec["seed"] = seed;
  if (kind == "swap") {
    spec["first"] = seeded(spec.at("first"), splitmix64(seed ^ 0x1));
    spec["second"] = seeded(spec.at("second"), splitmix64(seed ^ 0x2));
  }
  if (spec.contains("err") && !spec.contains("err_seed")) spec["err_seed"] = splitmix64(seed ^ 0x3);
  return spec;
}

std::string mode_name(LearningMode mode) {
  return mode == LearningMode::Passive ? "passive" : "active";
}

nlohmann::json metrics_json(const RankMetrics& m) {
  return {{"rho", m.rho}, {"recall_10pct", m.recall10}, {"recall_1pct", m.recall1}};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw ArgumentError("dataset is required");
  if (!(minsup > 0.0 && minsup <= 1.0)) throw ArgumentError("minsup must lie in (0,1]");
  if (!(minconf >= 0.0 && minconf <= 1.0)) throw ArgumentError("minconf must lie in [0,1]");
  if (measures.empty()) throw ArgumentError("at least one measure is required");
  if (mode == LearningMode::Passive && folds < 2) throw ArgumentError("folds must be at least 2");
  if (!(training_fraction > 0.0 && training_fraction < 1.0))
    throw ArgumentError("training fraction must lie in (0,1)");
  if (!(holdout >= 0.0 && holdout < 1.0)) throw ArgumentError("holdout must lie in [0,1)");
  if (repeats < 1) throw ArgumentError("repeats must be at least 1");
  if (theta < 2) throw ArgumentError("theta must be at least 2");
  if (iterations < 1) throw ArgumentError("T must be at least 1");
  if (err && !(*err >= 0.0 && *err <= 1.0)) throw ArgumentError("err must lie in [0,1]");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json names = nlohmann::json::array();
  for (MeasureId id : measures) names.push_back(std::string(measure_name(id)));
  nlohmann::json j = {
      {"dataset", dataset},
      {"minsup", minsup},
      {"minconf", minconf},
      {"max_head", max_head},
      {"measures", names},
      {"mode", mode_name(mode)},
      {"emulator", emulator},
      {"folds", folds},
      {"training_fraction", training_fraction},
      {"holdout", holdout},
      {"theta", theta},
      {"T", iterations},
      {"repeats", repeats},
      {"seed", seed},
      {"strategy", strategy == QueryStrategy::Sensitivity ? "sbg" : "random"},
      {"output", output},
  };
  if (err) j["err"] = *err;
  if (swap_after) {
    j["swap_after"] = *swap_after;
    j["swap_to"] = swap_to;
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.dataset = j.value("dataset", c.dataset);
  c.minsup = j.value("minsup", c.minsup);
  c.minconf = j.value("minconf", c.minconf);
  c.max_head = j.value("max_head", c.max_head);
  if (j.contains("measures")) {
    c.measures.clear();
    for (const auto& name : j.at("measures")) {
      auto id = measure_from_name(name.get<std::string>());
      if (!id) throw ArgumentError("unknown measure '" + name.get<std::string>() + "'");
      c.measures.push_back(*id);
    }
  }
  if (j.contains("mode")) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "passive") c.mode = LearningMode::Passive;
    else if (mode == "active") c.mode = LearningMode::Active;
    else throw ArgumentError("mode must be passive or active");
  }
  c.emulator = j.value("emulator", c.emulator);
  c.folds = j.value("folds", c.folds);
  c.training_fraction = j.value("training_fraction", c.training_fraction);
  c.holdout = j.value("holdout", c.holdout);
  c.theta = j.value("theta", c.theta);
  c.iterations = j.value("T", c.iterations);
  c.repeats = j.value("repeats", c.repeats);
  c.seed = j.value("seed", c.seed);
  if (j.contains("err")) c.err = j.at("err").get<double>();
  if (j.contains("swap_after")) c.swap_after = j.at("swap_after").get<std::size_t>();
  c.swap_to = j.value("swap_to", c.swap_to);
  if (j.contains("strategy")) {
    const auto s = j.at("strategy").get<std::string>();
    if (s == "sbg") c.strategy = QueryStrategy::Sensitivity;
    else if (s == "random" || s == "rg") c.strategy = QueryStrategy::Random;
    else throw ArgumentError("strategy must be sbg or random");
  }
  c.output = j.value("output", c.output);
  return c;
}

PatternCollection synthetic_collection(std::size_t n, std::size_t criteria, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < criteria; ++k) names.push_back("M" + std::to_string(k + 1));
  std::vector<PatternRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].id = static_cast<PatternId>(i);
    records[i].measures.resize(criteria);
    for (double& v : records[i].measures) v = unit(rng);
  }
  return PatternCollection(std::move(names), std::move(records));
}

TransactionDB synthetic_transactions(std::size_t n_transactions, std::size_t n_items,
                                     std::uint64_t seed) {
  if (n_items < 2) throw ArgumentError("synthetic data needs at least two items");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> base(n_items);
  for (double& p : base) p = 0.05 + 0.35 * unit(rng);

  struct Group {
    std::vector<Item> items;
    double p;
  };
  std::vector<Group> groups(std::max<std::size_t>(1, n_items / 3));
  std::vector<Item> all(n_items);
  std::iota(all.begin(), all.end(), 0);
  for (auto& g : groups) {
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t size = 2 + std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    g.items.assign(all.begin(), all.begin() + std::min(size, n_items));
    g.p = 0.05 + 0.25 * unit(rng);
  }

  std::vector<Itemset> transactions;
  transactions.reserve(n_transactions);
  for (std::size_t t = 0; t < n_transactions; ++t) {
    std::vector<Item> items;
    for (std::size_t i = 0; i < n_items; ++i)
      if (unit(rng) < base[i]) items.push_back(static_cast<Item>(i));
    for (const auto& g : groups)
      if (unit(rng) < g.p)
        for (Item i : g.items)
          if (unit(rng) < 0.9) items.push_back(i);
    if (items.empty()) items.push_back(static_cast<Item>(t % n_items));
    transactions.emplace_back(std::move(items));
  }
  return TransactionDB(std::move(transactions));
}

std::shared_ptr<const TransactionDB> load_transactions(const ExperimentConfig& config) {
  const std::string& ds = config.dataset;
  if (ds.rfind("measures:", 0) == 0)
    throw ArgumentError("'" + ds + "' has no transactions");
  if (ds.rfind("synthetic:", 0) == 0) {
    const auto rest = ds.substr(10);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw ArgumentError("synthetic dataset must be synthetic:<transactions>:<items>");
    return std::make_shared<const TransactionDB>(
        synthetic_transactions(std::stoul(rest.substr(0, colon)),
                               std::stoul(rest.substr(colon + 1)),
                               derive_seed(config.seed, kSplit, 0xdb)));
  }
  return std::make_shared<const TransactionDB>(load_fimi(ds));
}

std::vector<MinedRule> mine_rules(const TransactionDB& db, const ExperimentConfig& config) {
  const std::size_t minsup = absolute_support(config.minsup, db.size());
  const auto frequents = mine_frequent(db, minsup);
  return generate_rules(frequents, db, {config.minconf, config.max_head});
}

Corpus load_corpus(const ExperimentConfig& config) {
  config.validate();
  const std::string& ds = config.dataset;
  Corpus corpus;
  if (ds.rfind("measures:", 0) == 0) {
    const auto n = std::stoul(ds.substr(9));
    corpus.patterns = synthetic_collection(n, config.measures.size(),
                                           derive_seed(config.seed, kSplit, 0xda7a));
    return corpus;
  }
  corpus.db = load_transactions(config);
  corpus.patterns =
      PatternCollection::from_rules(*corpus.db, mine_rules(*corpus.db, config), config.measures);
  return corpus;
}

std::unique_ptr<FeedbackOracle> make_experiment_oracle(const ExperimentConfig& config,
                                                       const Corpus& corpus,
                                                       std::uint64_t run_seed) {
  nlohmann::json spec = config.emulator;
  if (config.swap_after)
    spec = {{"kind", "swap"}, {"first", spec}, {"second", config.swap_to},
            {"after", *config.swap_after}};
  spec = seeded(std::move(spec), derive_seed(run_seed, kEmulator, 0));
  if (config.err) {
    spec["err"] = *config.err;
    spec["err_seed"] = derive_seed(run_seed, kMistakes, 0);
  }
  return make_oracle(spec, corpus.patterns.criteria(), corpus.db);
}

RankMetrics evaluate(std::span<const PatternRecord* const> patterns, const WeightVector& w,
                     const FeedbackOracle& oracle) {
  const RankAssignment learned = rank_by_score(patterns, w);
  const RankAssignment target = RankAssignment::from_order(oracle.target(patterns).order);
  const std::size_t n = patterns.size();
  return {spearman(learned, target), recall_at(learned, target, percent_to_k(10.0, n)),
          recall_at(learned, target, percent_to_k(1.0, n))};
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json per_measure = nlohmann::json::object();
  for (std::size_t i = 0; i < measure_names.size(); ++i) per_measure[measure_names[i]] = rho[i];
  return {{"rho", per_measure}, {"vbm", vbm}};
}

AuditReport run_measure_audit(const PatternCollection& patterns, const FeedbackOracle& oracle) {
  if (patterns.size() < 2)
    throw ArgumentError("fewer than two rules mined; lower minsup or minconf");
  const auto ptrs = pointers(patterns.records());
  const RankAssignment target = RankAssignment::from_order(oracle.target(ptrs).order);
  const auto per_measure = measure_rankings(ptrs);

  AuditReport report;
  report.measure_names = patterns.measure_names();
  report.vbm = -1.0;
  for (const auto& ranks : per_measure) {
    report.rho.push_back(spearman(ranks, target));
    report.vbm = std::max(report.vbm, report.rho.back());
  }
  return report;
}

AuditReport run_measure_audit(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  const auto oracle = make_experiment_oracle(config, corpus, derive_seed(config.seed, 0, 0));
  return run_measure_audit(corpus.patterns, *oracle);
}

std::vector<RankMetrics> MetricsReport::mean_curve() const {
  std::size_t length = 0;
  for (const auto& p : curve) length = std::max(length, p.iteration);
  std::vector<RankMetrics> sums(length);
  std::vector<std::size_t> counts(length, 0);
  for (const auto& p : curve) {
    auto& s = sums[p.iteration - 1];
    s.rho += p.metrics.rho;
    s.recall10 += p.metrics.recall10;
    s.recall1 += p.metrics.recall1;
    ++counts[p.iteration - 1];
  }
  for (std::size_t t = 0; t < length; ++t) {
    if (counts[t] == 0) continue;
    const double c = static_cast<double>(counts[t]);
    sums[t].rho /= c;
    sums[t].recall10 /= c;
    sums[t].recall1 /= c;
  }
  return sums;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : runs) {
    rows.push_back({{"run", r.run},
                    {"metrics", metrics_json(r.metrics)},
                    {"learn_seconds", r.learn_seconds},
                    {"mean_latency", r.mean_latency},
                    {"max_latency", r.max_latency},
                    {"weights", r.weights}});
  }
  return {{"measures", measure_names},
          {"runs", rows},
          {"mean", metrics_json(mean)},
          {"mean_learn_seconds", mean_learn_seconds},
          {"mean_latency", mean_latency},
          {"max_latency", max_latency}};
}

void MetricsReport::write_curve_csv(std::ostream& out) const {
  const auto saved_precision = out.precision(12);
  out << "run,iteration,rho,recall_10pct,recall_1pct,latency_seconds\n";
  for (const auto& p : curve)
    out << p.run << ',' << p.iteration << ',' << p.metrics.rho << ',' << p.metrics.recall10 << ','
        << p.metrics.recall1 << ',' << p.latency << '\n';
  out.precision(saved_precision);
}

namespace {

void aggregate(MetricsReport& report) {
  const double n = static_cast<double>(report.runs.size());
  report.mean = {};
  report.mean_learn_seconds = report.mean_latency = report.max_latency = 0.0;
  for (const auto& r : report.runs) {
    report.mean.rho += r.metrics.rho / n;
    report.mean.recall10 += r.metrics.recall10 / n;
    report.mean.recall1 += r.metrics.recall1 / n;
    report.mean_learn_seconds += r.learn_seconds / n;
    report.mean_latency += r.mean_latency / n;
    report.max_latency = std::max(report.max_latency, r.max_latency);
  }
}

std::vector<std::size_t> shuffled_positions(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

MetricsReport run_passive_cv(const ExperimentConfig& config, const Corpus& corpus,
                             bool same_split) {
  config.validate();
  if (config.folds < 2) throw ArgumentError("folds must be at least 2");
  const std::size_t n = corpus.patterns.size();
  const auto train_size = static_cast<std::size_t>(
      std::ceil(config.training_fraction * static_cast<double>(n) - 1e-9));
  if (train_size < 2 || (!same_split && n - train_size < 2))
    throw ArgumentError("too few rules (" + std::to_string(n) + ") for a training/test split");

  MetricsReport report;
  report.measure_names = corpus.patterns.measure_names();
  for (std::size_t fold = 0; fold < config.folds; ++fold) {
    const std::uint64_t run_seed = derive_seed(config.seed, fold, 0);
    auto positions = shuffled_positions(n, derive_seed(run_seed, kSplit, 0));
    std::vector<std::size_t> train(positions.begin(), positions.begin() + train_size);
    std::vector<std::size_t> test(positions.begin() + train_size, positions.end());
    if (same_split) test = train;
    const PatternCollection train_set = corpus.patterns.subset(train);
    const PatternCollection test_set = corpus.patterns.subset(test);

    const auto oracle = make_experiment_oracle(config, corpus, run_seed);
    const auto started = Clock::now();
    const auto ranking = oracle->rank(pointers(train_set.records()));
    if (!ranking) throw ArgumentError("emulator declined to rank the training rules");
    const std::vector<FeedbackRanking> rankings{*ranking};
    const PassiveResult learned = run_passive(rankings, train_set);
    const double learn_seconds = seconds_since(started);

    RunMetrics row;
    row.run = fold;
    row.metrics = evaluate(pointers(test_set.records()), learned.weights, *oracle);
    row.learn_seconds = learn_seconds;
    row.weights = learned.weights.w;
    report.runs.push_back(std::move(row));
  }
  aggregate(report);
  return report;
}

MetricsReport run_passive_cv(const ExperimentConfig& config) {
  return run_passive_cv(config, load_corpus(config));
}

MetricsReport run_active_experiment(const ExperimentConfig& config, const Corpus& corpus) {
  config.validate();
  const std::size_t n = corpus.patterns.size();
  if (n < 2) throw ArgumentError("fewer than two patterns available");

  MetricsReport report;
  report.measure_names = corpus.patterns.measure_names();
  for (std::size_t run = 0; run < config.repeats; ++run) {
    const std::uint64_t run_seed = derive_seed(config.seed, run, 0);

    PatternCollection pool = corpus.patterns;
    PatternCollection held = corpus.patterns;
    if (config.holdout > 0.0) {
      const auto positions = shuffled_positions(n, derive_seed(run_seed, kSplit, 0));
      const auto held_size = static_cast<std::size_t>(config.holdout * static_cast<double>(n));
      if (held_size < 2 || n - held_size < 2) throw ArgumentError("holdout leaves too few patterns");
      pool = corpus.patterns.subset(
          std::vector<std::size_t>(positions.begin() + held_size, positions.end()));
      held = corpus.patterns.subset(
          std::vector<std::size_t>(positions.begin(), positions.begin() + held_size));
    }
    const auto eval = pointers(held.records());
    const auto oracle = make_experiment_oracle(config, corpus, run_seed);

    LearnerConfig lc;
    lc.theta = config.theta;
    lc.iterations = config.iterations;
    lc.seed = derive_seed(run_seed, kLearner, 0);
    lc.strategy = config.strategy;

    double latency_sum = 0.0;
    double latency_max = 0.0;
    auto observe = [&](const ActiveStep& step) {
      latency_sum += step.select_seconds;
      latency_max = std::max(latency_max, step.select_seconds);
      report.curve.push_back(
          {run, step.iteration, evaluate(eval, step.weights, *oracle), step.select_seconds});
    };
    const ActiveResult result =
        run_active(*oracle, pool.records(), pool.criteria(), lc, observe);

    RunMetrics row;
    row.run = run;
    row.metrics = evaluate(eval, result.weights, *oracle);
    row.learn_seconds = latency_sum;
    row.mean_latency = result.trace.empty() ? 0.0 : latency_sum / result.trace.size();
    row.max_latency = latency_max;
    row.weights = result.weights.w;
    report.runs.push_back(std::move(row));
  }
  aggregate(report);
  return report;
}

MetricsReport run_active_experiment(const ExperimentConfig& config) {
  return run_active_experiment(config, load_corpus(config));
}

void write_report_files(const std::string& prefix, const nlohmann::json& summary,
                        const MetricsReport* report) {
  if (prefix.empty()) return;
  {
    std::ofstream out(prefix + ".json");
    if (!out) throw ArgumentError("cannot write '" + prefix + ".json'");
    out << summary.dump(2) << '\n';
  }
  if (report && !report->curve.empty()) {
    std::ofstream out(prefix + ".csv");
    if (!out) throw ArgumentError("cannot write '" + prefix + ".csv'");
    report->write_curve_csv(out);
  }
}

}  // namespace ahprank
