#include <doctest.h>

#include <algorithm>
#include <random>

#include "ahprank/bench.hpp"
#include "ahprank/errors.hpp"
#include "ahprank/mining.hpp"
#include "ahprank/oracles.hpp"

using namespace ahprank;

namespace {

PatternRecord record(PatternId id, std::vector<double> values) {
  PatternRecord r;
  r.id = id;
  r.measures = values;
  r.scaled = std::move(values);
  return r;
}

bool is_permutation_of(const FeedbackRanking& r, std::span<const PatternRecord* const> shown) {
  std::vector<PatternId> a = r.order, b;
  for (const auto* p : shown) b.push_back(p->id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::shared_ptr<const TransactionDB> shared_db(const std::string& text) {
  return std::make_shared<const TransactionDB>(parse_fimi_string(text));
}

}  // namespace

TEST_CASE("rand emulator ranks by its weighted score") {
  const std::vector<PatternRecord> ps = {record(1, {0.2, 0.9}), record(2, {0.8, 0.1}),
                                         record(3, {0.5, 0.5})};
  const auto ptrs = pointers(ps);
  RandEmulator first_only(WeightVector{{1.0, 0.0}, 0});
  CHECK(first_only.rank(ptrs)->order == std::vector<PatternId>{2, 3, 1});
  RandEmulator second_only(WeightVector{{0.0, 1.0}, 0});
  CHECK(second_only.rank(ptrs)->order == std::vector<PatternId>{1, 3, 2});
  CHECK(second_only.target(ptrs) == *second_only.rank(ptrs));

  const auto r = RandEmulator::random(6, 99);
  double sum = 0;
  for (double v : r.weights().w) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK(RandEmulator::random(6, 99).weights().w == r.weights().w);
}

TEST_CASE("one-hot rand emulator agrees with the measure ranking") {
  const auto c = synthetic_collection(200, 4, 12);
  const auto ptrs = pointers(c.records());
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> w(4, 0.0);
    w[k] = 1.0;
    RandEmulator e(WeightVector{w, 0});
    std::vector<Scored> s;
    for (const auto* p : ptrs) s.push_back({p->id, p->measures[k]});
    CHECK(RankAssignment::from_order(e.rank(ptrs)->order) == rank_by(s));
  }
}

TEST_CASE("lex emulator compares measures in order") {
  LexEmulator lex({1, 0});
  const std::vector<PatternRecord> differ = {record(1, {0.9, 0.1}), record(2, {0.1, 0.5})};
  CHECK(lex.rank(pointers(differ))->order == std::vector<PatternId>{2, 1});
  const std::vector<PatternRecord> second = {record(1, {0.1, 0.5}), record(2, {0.9, 0.5})};
  CHECK(lex.rank(pointers(second))->order == std::vector<PatternId>{2, 1});
  const std::vector<PatternRecord> tie = {record(8, {0.3, 0.3}), record(4, {0.3, 0.3})};
  CHECK(lex.rank(pointers(tie))->order == std::vector<PatternId>{4, 8});

  CHECK_THROWS_AS(LexEmulator({0, 0}), ArgumentError);
  CHECK_THROWS_AS(LexEmulator({1, 2}), ArgumentError);
  auto order = LexEmulator::random(5, 3).order();
  std::sort(order.begin(), order.end());
  CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("emulators return permutations and ignore presentation order") {
  const auto c = synthetic_collection(300, 5, 21);
  std::mt19937_64 rng(1);
  RandEmulator rand = RandEmulator::random(5, 4);
  LexEmulator lex = LexEmulator::random(5, 4);
  for (int k = 0; k < 200; ++k) {
    const auto sample = sample_patterns(c.records(), 2 + rng() % 10, rng);
    auto shuffled = sample;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (ScoringOracle* o : {static_cast<ScoringOracle*>(&rand), static_cast<ScoringOracle*>(&lex)}) {
      const auto r = *o->rank(sample);
      CHECK(is_permutation_of(r, sample));
      CHECK(r == *o->rank(shuffled));
    }
  }
}

TEST_CASE("chi-squared statistic") {
  // a=1, b=2
  const auto db = parse_fimi_string("1 2\n1 2\n1\n2\n");
  CHECK(chi_squared(db, {Itemset{1}, Itemset{2}}) == doctest::Approx(1.0 / 36).epsilon(1e-14));
  CHECK(chi_squared(db, {Itemset{1}, Itemset{5}}) == 0.0);

  // Items 1 and 2 independent: 2 of 4 transactions hold each, 1 holds both.
  const auto indep = parse_fimi_string("1 2\n1\n2\n3\n");
  CHECK(chi_squared(indep, {Itemset{1}, Itemset{2}}) == 0.0);
}

TEST_CASE("doubling every transaction doubles chi-squared") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 30; ++round) {
    std::vector<Itemset> txs;
    for (int t = 0; t < 40; ++t) {
      std::vector<Item> row;
      for (Item i = 0; i < 6; ++i)
        if (rng() % 3 == 0) row.push_back(i);
      txs.emplace_back(std::move(row));
    }
    auto twice = txs;
    twice.insert(twice.end(), txs.begin(), txs.end());
    const TransactionDB once(txs), doubled(twice);
    for (Item x = 0; x < 6; ++x)
      for (Item y = 0; y < 6; ++y) {
        if (x == y) continue;
        const AssociationRule r{Itemset{x}, Itemset{y}};
        CHECK(chi_squared(doubled, r) == doctest::Approx(2 * chi_squared(once, r)).epsilon(1e-12));
      }
  }
}

TEST_CASE("chi emulator ranks rules by chi-squared") {
  const auto db = shared_db("1 2\n1 2\n1 2 3\n3\n3 4\n1\n");
  ChiEmulator chi(db);
  PatternRecord strong, weak, none;
  strong.id = 1;
  strong.rule = AssociationRule{Itemset{1}, Itemset{2}};
  weak.id = 2;
  weak.rule = AssociationRule{Itemset{2}, Itemset{3}};
  none.id = 3;
  const std::vector<const PatternRecord*> shown = {&weak, &strong};
  CHECK(chi.score(strong) > chi.score(weak));
  CHECK(chi.rank(shown)->order == std::vector<PatternId>{1, 2});
  const std::vector<const PatternRecord*> bad = {&strong, &none};
  CHECK_THROWS_AS(chi.rank(bad), ArgumentError);
  CHECK_THROWS_AS(ChiEmulator(nullptr), ArgumentError);
}

TEST_CASE("mistake wrapper") {
  const std::vector<PatternRecord> ps = {record(1, {0.9}), record(2, {0.1})};
  const auto ptrs = pointers(ps);
  MistakeOracle never(rand_emu(WeightVector{{1.0}, 0}), 0.0, 5);
  MistakeOracle always(rand_emu(WeightVector{{1.0}, 0}), 1.0, 5);
  for (int k = 0; k < 20; ++k) {
    CHECK(never.rank(ptrs)->order == std::vector<PatternId>{1, 2});
    CHECK(always.rank(ptrs)->order == std::vector<PatternId>{2, 1});
  }
  CHECK(never.flips() == 0);
  CHECK(always.flips() == 20);
  CHECK(always.target(ptrs).order == std::vector<PatternId>{1, 2});

  MistakeOracle a(rand_emu(WeightVector{{1.0}, 0}), 0.4, 77);
  MistakeOracle b(rand_emu(WeightVector{{1.0}, 0}), 0.4, 77);
  for (int k = 0; k < 20; ++k) CHECK(a.rank(ptrs) == b.rank(ptrs));
  CHECK(a.flips() == b.flips());
  CHECK(a.flips() > 0);
  CHECK(a.flips() < 20);

  CHECK_THROWS_AS(MistakeOracle(rand_emu(WeightVector{{1.0}, 0}), 1.5, 1), ArgumentError);
  CHECK_THROWS_AS(MistakeOracle(rand_emu(WeightVector{{1.0}, 0}), -0.1, 1), ArgumentError);
}

TEST_CASE("swap wrapper") {
  const std::vector<PatternRecord> ps = {record(1, {0.9, 0.1}), record(2, {0.1, 0.9})};
  const auto ptrs = pointers(ps);
  const auto first = [] { return rand_emu(WeightVector{{1.0, 0.0}, 0}); };
  const auto second = [] { return rand_emu(WeightVector{{0.0, 1.0}, 0}); };

  SwapOracle immediate(first(), second(), 0);
  CHECK(immediate.target(ptrs).order == std::vector<PatternId>{2, 1});
  for (int k = 0; k < 5; ++k) CHECK(immediate.rank(ptrs)->order == std::vector<PatternId>{2, 1});

  SwapOracle never(first(), second(), 100);
  for (int k = 0; k < 20; ++k) CHECK(never.rank(ptrs)->order == std::vector<PatternId>{1, 2});

  SwapOracle mid(first(), second(), 10);
  int from_first = 0, from_second = 0;
  CHECK(mid.target(ptrs).order == std::vector<PatternId>{1, 2});
  for (int k = 0; k < 20; ++k) (mid.rank(ptrs)->order.front() == 1 ? from_first : from_second)++;
  CHECK(from_first == 10);
  CHECK(from_second == 10);
  CHECK(mid.answered() == 20);
  CHECK(mid.target(ptrs).order == std::vector<PatternId>{2, 1});
}

TEST_CASE("scripted oracle replays preferences then aborts") {
  const std::vector<PatternRecord> ps = {record(1, {0.9}), record(2, {0.1})};
  const auto ptrs = pointers(ps);
  ScriptedOracle s({2, 1});
  CHECK(s.rank(ptrs)->order == std::vector<PatternId>{2, 1});
  CHECK(s.rank(ptrs)->order == std::vector<PatternId>{1, 2});
  CHECK_FALSE(s.rank(ptrs).has_value());

  ScriptedOracle wrong({7});
  CHECK_THROWS_AS(wrong.rank(ptrs), ArgumentError);
}

TEST_CASE("oracle factory") {
  const auto db = shared_db("1 2\n1 2\n1\n2\n");
  const std::vector<PatternRecord> ps = {record(1, {0.9, 0.1}), record(2, {0.1, 0.9})};
  const auto ptrs = pointers(ps);

  auto r = make_oracle({{"kind", "rand"}, {"weights", {0.0, 1.0}}}, 2, nullptr);
  CHECK(r->rank(ptrs)->order == std::vector<PatternId>{2, 1});
  auto l = make_oracle({{"kind", "lex"}, {"order", {0, 1}}}, 2, nullptr);
  CHECK(l->rank(ptrs)->order == std::vector<PatternId>{1, 2});
  auto flipped = make_oracle({{"kind", "lex"}, {"order", {0, 1}}, {"err", 1.0}, {"err_seed", 3}}, 2,
                             nullptr);
  CHECK(flipped->rank(ptrs)->order == std::vector<PatternId>{2, 1});
  auto swap = make_oracle({{"kind", "swap"},
                           {"first", {{"kind", "lex"}, {"order", {0, 1}}}},
                           {"second", {{"kind", "lex"}, {"order", {1, 0}}}},
                           {"after", 1}},
                          2, nullptr);
  CHECK(swap->rank(ptrs)->order == std::vector<PatternId>{1, 2});
  CHECK(swap->rank(ptrs)->order == std::vector<PatternId>{2, 1});
  CHECK_NOTHROW(make_oracle({{"kind", "chi"}}, 2, db));
  CHECK_THROWS_AS(make_oracle({{"kind", "chi"}}, 2, nullptr), ArgumentError);
  CHECK_THROWS_AS(make_oracle({{"kind", "oracle"}}, 2, nullptr), ArgumentError);
  CHECK_THROWS_AS(make_oracle({{"kind", "rand"}, {"weights", {1.0}}}, 2, nullptr), ArgumentError);
}
