#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ahprank/bench.hpp"
#include "ahprank/errors.hpp"
#include "ahprank/learner.hpp"
#include "ahprank/oracles.hpp"
#include "fixtures.hpp"

using namespace ahprank;

namespace {

PatternRecord record(PatternId id, std::vector<double> values) {
  PatternRecord r;
  r.id = id;
  r.measures = values;
  r.scaled = std::move(values);
  return r;
}

WeightVector weights(std::vector<double> w) { return WeightVector{std::move(w), 0.0}; }

// Within-pair Kendall gaps computed straight from the definition.
std::vector<double> pair_gaps(const PatternRecord& first, const PatternRecord& second) {
  // With two patterns K is 1 when the measure agrees with the user and 0 otherwise;
  // ties favour the smaller id.
  std::vector<double> k;
  for (std::size_t i = 0; i < first.measures.size(); ++i) {
    const bool agrees = first.measures[i] > second.measures[i] ||
                        (first.measures[i] == second.measures[i] && first.id < second.id);
    k.push_back(agrees ? 1.0 : 0.0);
  }
  return k;
}

}  // namespace

TEST_CASE("score_gw on the ten-pattern fixture") {
  const auto patterns = fixtures::running_collection();
  const auto w = weights(fixtures::kFittedWeights);
  CHECK(std::abs(score_gw(patterns.at(7), w) - 0.72) <= 0.01);
  CHECK(std::abs(score_gw(patterns.at(3), w) - 0.68) <= 0.01);
  CHECK(score_gw(patterns.at(7), w) == doctest::Approx(0.72605).epsilon(1e-12));
  CHECK(score_gw(patterns.at(3), w) == doctest::Approx(0.6869).epsilon(1e-12));
  CHECK(score_gw(patterns.at(7), weights({0, 0, 1, 0, 0})) == 0.79);
  CHECK_THROWS_AS(score_gw(patterns.at(7), weights({0.5, 0.5})), ArgumentError);
}

TEST_CASE("g_w ranking is invariant under positive rescaling of w") {
  const auto collection = synthetic_collection(300, 5, 3);
  const auto ptrs = pointers(collection.records());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> w(5);
    for (auto& x : w) x = u(rng);
    auto scaled = w;
    for (auto& x : scaled) x *= 4.0;  // exact in binary
    CHECK(rank_by_score(ptrs, weights(w)) == rank_by_score(ptrs, weights(scaled)));
  }
}

TEST_CASE("sigma examples") {
  const auto p1 = record(1, {0.1, 0.2, 0.3, 0.7});
  const auto p2 = record(2, {0.7, 0.3, 0.2, 0.1});
  const auto uniform = WeightVector::uniform(4);
  CHECK(score_gw(p1, uniform) == score_gw(p2, uniform));
  CHECK(sigma(p1, p2, uniform) == 0.0);
  CHECK(sigma(p1, p1, uniform) == 0.0);

  // g-gap 0.1 over a measure-sum gap 0.5.
  const auto a = record(3, {0.6, 0.5});
  const auto b = record(4, {0.4, 0.2});
  CHECK(sigma(a, b, weights({0.0, 1.0 / 3.0})) == doctest::Approx(0.2));

  const auto c = record(5, {0.5, 0.2});
  const auto d = record(6, {0.2, 0.5});
  CHECK(std::isinf(sigma(c, d, weights({0.8, 0.2}))));
}

TEST_CASE("select_query picks the adjacent pair of smallest sigma") {
  const std::vector<PatternRecord> two = {record(4, {0.1, 0.3}), record(9, {0.4, 0.2})};
  const auto two_ptrs = pointers(two);
  CHECK(select_query(two_ptrs, WeightVector::uniform(2)) == std::pair<PatternId, PatternId>{9, 4});

  // Scores under (0.8, 0.2): 1.0, 0.4, 0.37; σ(1,2) = 0.5 and σ(2,3) = 0.1.
  const std::vector<PatternRecord> three = {record(1, {1.0, 1.0}), record(2, {0.4, 0.4}),
                                            record(3, {0.45, 0.05})};
  const auto w = weights({0.8, 0.2});
  CHECK(sigma(three[0], three[1], w) == doctest::Approx(0.5));
  CHECK(sigma(three[1], three[2], w) == doctest::Approx(0.1));
  const auto three_ptrs = pointers(three);
  CHECK(select_query(three_ptrs, w) == std::pair<PatternId, PatternId>{2, 3});

  const std::vector<PatternRecord> example = {
      record(1, {0.1, 0.2, 0.3, 0.7}), record(2, {0.7, 0.3, 0.2, 0.1}),
      record(3, {0.9, 0.9, 0.9, 0.9}), record(4, {0.0, 0.0, 0.0, 0.05})};
  const auto example_ptrs = pointers(example);
  CHECK(select_query(example_ptrs, WeightVector::uniform(4)) ==
        std::pair<PatternId, PatternId>{1, 2});

  const std::vector<PatternRecord> one = {record(1, {0.1})};
  const auto one_ptrs = pointers(one);
  CHECK_THROWS_AS(select_query(one_ptrs, WeightVector::uniform(1)), ArgumentError);
}

TEST_CASE("select_query returns a pair adjacent in score order") {
  const auto collection = synthetic_collection(400, 6, 17);
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> raw(6);
    for (auto& x : raw) x = u(rng);
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    for (auto& x : raw) x /= total;
    const auto w = weights(raw);
    const auto sample = sample_patterns(collection.records(), 50, rng);
    const auto [a, b] = select_query(sample, w);
    const auto sorted = sort_by_score(sample, w);
    bool adjacent = false;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      adjacent |= sorted[i]->id == a && sorted[i + 1]->id == b;
      best = std::min(best, sigma(*sorted[i], *sorted[i + 1], w));
    }
    CHECK(adjacent);
    CHECK(sigma(collection.at(a), collection.at(b), w) == best);
  }
}

TEST_CASE("sample_patterns draws distinct records reproducibly") {
  const auto collection = synthetic_collection(1000, 3, 1);
  Rng a(42), b(42);
  const auto s1 = sample_patterns(collection.records(), 2, a);
  CHECK(s1.size() == 2);
  CHECK(s1[0]->id != s1[1]->id);
  CHECK(s1 == sample_patterns(collection.records(), 2, b));

  const auto big = sample_patterns(collection.records(), 300, a);
  std::set<PatternId> ids;
  for (const auto* p : big) ids.insert(p->id);
  CHECK(ids.size() == 300);

  const auto small = synthetic_collection(10, 3, 1);
  const auto all = sample_patterns(small.records(), 50, a);
  CHECK(all.size() == 10);
  std::set<PatternId> all_ids;
  for (const auto* p : all) all_ids.insert(p->id);
  CHECK(all_ids.size() == 10);

  CHECK_THROWS_AS(sample_patterns(std::span<const PatternRecord>{}, 5, a), ArgumentError);
  CHECK_THROWS_AS(sample_patterns(small.records(), 1, a), ArgumentError);
}

TEST_CASE("sample_patterns is roughly uniform") {
  const auto collection = synthetic_collection(20, 2, 1);
  Rng rng(3);
  std::vector<int> hits(20, 0);
  const int rounds = 20000;
  for (int k = 0; k < rounds; ++k)
    for (const auto* p : sample_patterns(collection.records(), 5, rng)) ++hits[p->id];
  for (int h : hits) CHECK(std::abs(h - rounds / 4) < 400);  // expected 5000, sd ≈ 61
}

TEST_CASE("learn_weights applies the running average") {
  const std::vector<PatternRecord> pool = {record(1, {0.9, 0.1, 0.5}),
                                           record(2, {0.2, 0.8, 0.5}),
                                           record(3, {0.4, 0.6, 0.1})};
  DeltaState state(3);
  const FeedbackRanking r1{{1, 2}};
  const std::vector<const PatternRecord*> ranked1 = {&pool[0], &pool[1]};
  const auto w1 = learn_weights(state, r1, ranked1);
  const auto g1 = pair_gaps(pool[0], pool[1]);
  CHECK(state.observations() == 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(state.at(i, j) == g1[i] - g1[j]);
  CHECK(w1.w == evm_weights(build_matrix(state)).w);

  const FeedbackRanking r2{{3, 1}};
  const std::vector<const PatternRecord*> ranked2 = {&pool[2], &pool[0]};
  learn_weights(state, r2, ranked2);
  const auto g2 = pair_gaps(pool[2], pool[0]);
  CHECK(state.observations() == 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(state.at(i, j) == doctest::Approx(((g1[i] - g1[j]) + (g2[i] - g2[j])) / 2));

  const FeedbackRanking single{{1}};
  const std::vector<const PatternRecord*> one = {&pool[0]};
  CHECK_THROWS_AS(learn_weights(state, single, one), ArgumentError);
}

TEST_CASE("learn_weights on longer rankings uses within-set ranks") {
  const auto patterns = fixtures::running_collection();
  const FeedbackRanking s{{3, 1, 5, 2, 4}};
  const auto ranked = patterns.resolve(s.order);
  const auto measure_ranks = measure_rankings(ranked);
  const auto k = measure_concordance(s, measure_ranks);
  REQUIRE(k.size() == 5);
  const auto user = RankAssignment::from_order(s.order);
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<Scored> sc;
    for (const auto* p : ranked) sc.push_back({p->id, p->measures[i]});
    CHECK(k[i] == kendall_w(rank_by(sc), user));
  }
  // Global ranks restricted to the set give the same concordances.
  const auto global = measure_rankings(pointers(patterns.records()));
  CHECK(measure_concordance(s, global) == k);
}

TEST_CASE("fixed gaps produce the eigenvector of their comparison matrix") {
  // The fitted matrix is exactly reproduced; its eigenvector is what the learner returns.
  const auto state = fixtures::running_gaps();
  const auto w = evm_weights(build_matrix(state));
  const auto direct = evm_weights(ComparisonMatrix::from_rows(fixtures::kComparison));
  CHECK(w.w == direct.w);
}

TEST_CASE("run_passive over the ten-pattern fixture") {
  const auto patterns = fixtures::running_collection();
  const std::vector<FeedbackRanking> one = {FeedbackRanking{{3, 1, 5, 2, 4}}};
  const auto r = run_passive(one, patterns);
  CHECK(r.delta.observations() == 1);
  CHECK(r.trace.size() == 1);
  CHECK(std::accumulate(r.weights.w.begin(), r.weights.w.end(), 0.0) == doctest::Approx(1.0));

  const std::vector<FeedbackRanking> twice = {one[0], one[0]};
  const auto r2 = run_passive(twice, patterns);
  CHECK(r2.delta.observations() == 2);
  for (std::size_t i = 0; i < 5; ++i) CHECK(r2.weights[i] == doctest::Approx(r.weights[i]).epsilon(1e-12));

  CHECK_THROWS_AS(run_passive(std::vector<FeedbackRanking>{}, patterns), ArgumentError);
  const std::vector<FeedbackRanking> bad = {one[0], FeedbackRanking{{3, 99}}};
  try {
    run_passive(bad, patterns);
    FAIL("expected an error");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("ranking 1") != std::string::npos);
  }
}

TEST_CASE("run_active performs exactly T queries") {
  const auto pool = synthetic_collection(500, 4, 2);
  RandEmulator oracle = RandEmulator::random(4, 8);
  LearnerConfig config;
  config.theta = 100;
  config.iterations = 1;
  config.seed = 3;
  const auto one = run_active(oracle, pool.records(), 4, config);
  CHECK(one.trace.size() == 1);
  CHECK_FALSE(one.aborted);
  CHECK(one.trace[0].iteration == 1);
  CHECK(one.weights.w == one.trace[0].weights.w);

  config.iterations = 15;
  std::size_t observed = 0;
  const auto many = run_active(oracle, pool.records(), 4, config,
                               [&](const ActiveStep&) { ++observed; });
  CHECK(many.trace.size() == 15);
  CHECK(observed == 15);
}

TEST_CASE("run_active is deterministic for a fixed seed") {
  const auto pool = synthetic_collection(2000, 5, 4);
  for (QueryStrategy strategy : {QueryStrategy::Sensitivity, QueryStrategy::Random}) {
    LearnerConfig config;
    config.theta = 300;
    config.iterations = 12;
    config.seed = 77;
    config.strategy = strategy;
    RandEmulator o1 = RandEmulator::random(5, 1), o2 = RandEmulator::random(5, 1);
    const auto a = run_active(o1, pool.records(), 5, config);
    const auto b = run_active(o2, pool.records(), 5, config);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t t = 0; t < a.trace.size(); ++t) {
      CHECK(a.trace[t].query == b.trace[t].query);
      CHECK(a.trace[t].response == b.trace[t].response);
      CHECK(a.trace[t].weights.w == b.trace[t].weights.w);
    }
  }
}

TEST_CASE("run_active stops when the oracle aborts") {
  const auto pool = synthetic_collection(100, 3, 5);
  LearnerConfig config;
  config.theta = 50;
  config.iterations = 10;
  config.seed = 1;
  // Scripted answers that prefer ids which will not match: the script runs out after 0 answers.
  ScriptedOracle oracle({});
  const auto r = run_active(oracle, pool.records(), 3, config);
  CHECK(r.aborted);
  CHECK(r.trace.empty());
  CHECK(r.weights.w == WeightVector::uniform(3).w);
}

TEST_CASE("active learner validates answers against the pending query") {
  const auto pool = synthetic_collection(50, 3, 6);
  LearnerConfig config;
  config.theta = 20;
  config.iterations = 5;
  ActiveLearner learner(pool.records(), 3, config);
  CHECK_FALSE(learner.has_pending());
  CHECK_THROWS_AS(learner.absorb(FeedbackRanking{{0, 1}}), ArgumentError);
  const auto [a, b] = learner.propose();
  CHECK(learner.has_pending());
  const PatternId stranger = a->id != 0 && b->id != 0 ? 0 : (a->id != 1 && b->id != 1 ? 1 : 2);
  CHECK_THROWS_AS(learner.absorb(FeedbackRanking{{a->id, stranger}}), ArgumentError);
  learner.absorb(FeedbackRanking{{b->id, a->id}});
  CHECK_FALSE(learner.has_pending());
  CHECK(learner.iteration() == 1);

  LearnerConfig bad;
  bad.theta = 1;
  CHECK_THROWS_AS(ActiveLearner(pool.records(), 3, bad), ArgumentError);
  bad.theta = 10;
  bad.iterations = 0;
  CHECK_THROWS_AS(ActiveLearner(pool.records(), 3, bad), ArgumentError);
}

TEST_CASE("trace CSV layout") {
  const auto pool = synthetic_collection(60, 2, 7);
  LearnerConfig config;
  config.theta = 30;
  config.iterations = 2;
  RandEmulator oracle = RandEmulator::random(2, 2);
  const auto r = run_active(oracle, pool.records(), 2, config);
  std::ostringstream out;
  const std::vector<std::string> names = {"A", "B"};
  write_trace_csv(out, r.trace, names);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "iteration,w_A,w_B,query_a,query_b,response");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 2);
}
