#include "ahprank/oracles.hpp"

#include <algorithm>
#include <numeric>

#include "ahprank/errors.hpp"
#include "ahprank/learner.hpp"

namespace ahprank {

std::optional<FeedbackRanking> ScoringOracle::rank(std::span<const PatternRecord* const> patterns) {
  return ordered(patterns);
}

FeedbackRanking ScoringOracle::target(std::span<const PatternRecord* const> patterns) const {
  return ordered(patterns);
}

FeedbackRanking ScoringOracle::ordered(std::span<const PatternRecord* const> patterns) const {
  std::vector<const PatternRecord*> sorted(patterns.begin(), patterns.end());
  std::sort(sorted.begin(), sorted.end(), [this](const PatternRecord* a, const PatternRecord* b) {
    if (prefers(*a, *b)) return true;
    if (prefers(*b, *a)) return false;
    return a->id < b->id;
  });
  FeedbackRanking out;
  out.order.reserve(sorted.size());
  for (const PatternRecord* p : sorted) out.order.push_back(p->id);
  return out;
}

RandEmulator::RandEmulator(WeightVector weights) : weights_(std::move(weights)) {
  if (weights_.w.empty()) throw ArgumentError("rand emulator needs weights");
  for (double v : weights_.w)
    if (!(v >= 0.0)) throw ArgumentError("rand emulator weights must be non-negative");
}

RandEmulator RandEmulator::random(std::size_t criteria, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(criteria);
  for (double& v : w) v = unit(rng);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return RandEmulator(WeightVector{std::move(w), 0.0});
}

bool RandEmulator::prefers(const PatternRecord& a, const PatternRecord& b) const {
  return score_gw(a, weights_) > score_gw(b, weights_);
}

LexEmulator::LexEmulator(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<std::size_t> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw ArgumentError("lex order must be a permutation of the measures");
  if (order_.empty()) throw ArgumentError("lex order is empty");
}

LexEmulator LexEmulator::random(std::size_t criteria, std::uint64_t seed) {
  std::vector<std::size_t> order(criteria);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return LexEmulator(std::move(order));
}

bool LexEmulator::prefers(const PatternRecord& a, const PatternRecord& b) const {
  for (std::size_t k : order_) {
    const double x = a.measures.at(k);
    const double y = b.measures.at(k);
    if (x != y) return x > y;
  }
  return false;
}

double chi_squared(const TransactionDB& db, const AssociationRule& rule) {
  const double n = static_cast<double>(db.size());
  const double fx = static_cast<double>(db.freq(rule.body));
  const double fy = static_cast<double>(db.freq(rule.head));
  if (fx * fy == 0.0 || n == 0.0) return 0.0;
  const double fxy = static_cast<double>(db.freq(rule.body.united(rule.head)));
  const double expected = fx * fy / n;
  const double dev = fxy - expected;
  return dev * dev / expected;
}

ChiEmulator::ChiEmulator(std::shared_ptr<const TransactionDB> db) : db_(std::move(db)) {
  if (!db_) throw ArgumentError("chi emulator needs a transaction database");
}

double ChiEmulator::score(const PatternRecord& p) const {
  if (!p.rule) throw ArgumentError("pattern " + std::to_string(p.id) + " carries no rule");
  std::lock_guard lock(cache_mutex_);
  auto it = cache_.find(p.id);
  if (it != cache_.end() && it->second.rule == *p.rule) return it->second.chi;
  const double chi = chi_squared(*db_, *p.rule);
  cache_.insert_or_assign(p.id, Cached{*p.rule, chi});
  return chi;
}

bool ChiEmulator::prefers(const PatternRecord& a, const PatternRecord& b) const {
  return score(a) > score(b);
}

FeedbackRanking ChiEmulator::ordered(std::span<const PatternRecord* const> patterns) const {
  std::vector<Scored> scores;
  scores.reserve(patterns.size());
  for (const PatternRecord* p : patterns) scores.push_back({p->id, score(*p)});
  std::sort(scores.begin(), scores.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  FeedbackRanking out;
  out.order.reserve(scores.size());
  for (const auto& s : scores) out.order.push_back(s.id);
  return out;
}

MistakeOracle::MistakeOracle(std::unique_ptr<FeedbackOracle> inner, double err,
                             std::uint64_t seed)
    : inner_(std::move(inner)), err_(err), rng_(seed) {
  if (!inner_) throw ArgumentError("mistake wrapper needs an inner oracle");
  if (!(err >= 0.0 && err <= 1.0)) throw ArgumentError("err must lie in [0,1]");
}

std::optional<FeedbackRanking> MistakeOracle::rank(
    std::span<const PatternRecord* const> patterns) {
  auto answer = inner_->rank(patterns);
  if (!answer) return answer;
  // One draw per query regardless of err keeps flip patterns comparable.
  const bool flip = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < err_;
  if (flip) {
    std::reverse(answer->order.begin(), answer->order.end());
    ++flips_;
  }
  return answer;
}

FeedbackRanking MistakeOracle::target(std::span<const PatternRecord* const> patterns) const {
  return inner_->target(patterns);
}

SwapOracle::SwapOracle(std::unique_ptr<FeedbackOracle> first,
                       std::unique_ptr<FeedbackOracle> second, std::size_t switch_after)
    : first_(std::move(first)), second_(std::move(second)), switch_after_(switch_after) {
  if (!first_ || !second_) throw ArgumentError("swap wrapper needs two oracles");
}

const FeedbackOracle& SwapOracle::current() const {
  return answered_ < switch_after_ ? *first_ : *second_;
}

std::optional<FeedbackRanking> SwapOracle::rank(std::span<const PatternRecord* const> patterns) {
  FeedbackOracle& active = answered_ < switch_after_ ? *first_ : *second_;
  auto answer = active.rank(patterns);
  if (answer) ++answered_;
  return answer;
}

FeedbackRanking SwapOracle::target(std::span<const PatternRecord* const> patterns) const {
  return current().target(patterns);
}

ScriptedOracle::ScriptedOracle(std::vector<PatternId> preferred)
    : preferred_(std::move(preferred)) {}

std::optional<FeedbackRanking> ScriptedOracle::rank(
    std::span<const PatternRecord* const> patterns) {
  if (next_ >= preferred_.size()) return std::nullopt;
  const PatternId first = preferred_[next_++];
  const bool shown = std::any_of(patterns.begin(), patterns.end(),
                                 [first](const PatternRecord* p) { return p->id == first; });
  if (!shown) throw ArgumentError("scripted preference " + std::to_string(first) + " was not presented");
  FeedbackRanking out;
  out.order.push_back(first);
  for (const PatternRecord* p : patterns)
    if (p->id != first) out.order.push_back(p->id);
  return out;
}

FeedbackRanking ScriptedOracle::target(std::span<const PatternRecord* const>) const {
  throw ArgumentError("a scripted oracle has no target ranking");
}

std::unique_ptr<FeedbackOracle> rand_emu(WeightVector weights) {
  return std::make_unique<RandEmulator>(std::move(weights));
}

std::unique_ptr<FeedbackOracle> lex_emu(std::vector<std::size_t> order) {
  return std::make_unique<LexEmulator>(std::move(order));
}

std::unique_ptr<FeedbackOracle> chi_emu(std::shared_ptr<const TransactionDB> db) {
  return std::make_unique<ChiEmulator>(std::move(db));
}

std::unique_ptr<FeedbackOracle> with_mistakes(std::unique_ptr<FeedbackOracle> inner, double err,
                                              std::uint64_t seed) {
  return std::make_unique<MistakeOracle>(std::move(inner), err, seed);
}

std::unique_ptr<FeedbackOracle> with_swap(std::unique_ptr<FeedbackOracle> first,
                                          std::unique_ptr<FeedbackOracle> second,
                                          std::size_t switch_after) {
  return std::make_unique<SwapOracle>(std::move(first), std::move(second), switch_after);
}

std::unique_ptr<FeedbackOracle> make_oracle(const nlohmann::json& spec, std::size_t criteria,
                                            std::shared_ptr<const TransactionDB> db) {
  const std::string kind = spec.at("kind").get<std::string>();
  std::unique_ptr<FeedbackOracle> oracle;
  if (kind == "rand") {
    if (spec.contains("weights")) {
      auto w = spec.at("weights").get<std::vector<double>>();
      if (w.size() != criteria) throw ArgumentError("rand weights must have one entry per measure");
      oracle = rand_emu(WeightVector{std::move(w), 0.0});
    } else {
      oracle = std::make_unique<RandEmulator>(
          RandEmulator::random(criteria, spec.value("seed", std::uint64_t{0})));
    }
  } else if (kind == "lex") {
    if (spec.contains("order")) {
      auto order = spec.at("order").get<std::vector<std::size_t>>();
      if (order.size() != criteria) throw ArgumentError("lex order must cover every measure");
      oracle = lex_emu(std::move(order));
    } else {
      oracle = std::make_unique<LexEmulator>(
          LexEmulator::random(criteria, spec.value("seed", std::uint64_t{0})));
    }
  } else if (kind == "chi") {
    oracle = chi_emu(std::move(db));
  } else if (kind == "swap") {
    oracle = with_swap(make_oracle(spec.at("first"), criteria, db),
                       make_oracle(spec.at("second"), criteria, db),
                       spec.at("after").get<std::size_t>());
  } else {
    throw ArgumentError("unknown emulator kind '" + kind + "'");
  }
  if (spec.contains("err"))
    oracle = with_mistakes(std::move(oracle), spec.at("err").get<double>(),
                           spec.value("err_seed", std::uint64_t{0}));
  return oracle;
}

}  // namespace ahprank
