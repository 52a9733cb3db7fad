#include "ahprank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ahprank/errors.hpp"

namespace ahprank {

RankAssignment RankAssignment::from_order(std::span<const PatternId> order) {
  std::vector<std::size_t> perm(order.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });

  RankAssignment r;
  r.ids_.reserve(order.size());
  r.ranks_.reserve(order.size());
  for (std::size_t pos : perm) {
    if (!r.ids_.empty() && r.ids_.back() == order[pos])
      throw ArgumentError("ranking contains duplicate pattern id " + std::to_string(order[pos]));
    r.ids_.push_back(order[pos]);
    r.ranks_.push_back(static_cast<std::uint32_t>(pos + 1));
  }
  return r;
}

bool RankAssignment::contains(PatternId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::uint32_t RankAssignment::rank_of(PatternId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id)
    throw ArgumentError("pattern " + std::to_string(id) + " is not ranked");
  return ranks_[it - ids_.begin()];
}

std::vector<PatternId> RankAssignment::order() const {
  std::vector<PatternId> out(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) out[ranks_[i] - 1] = ids_[i];
  return out;
}

RankAssignment RankAssignment::restricted_to(std::span<const PatternId> subset) const {
  std::vector<std::pair<std::uint32_t, PatternId>> by_rank;
  by_rank.reserve(subset.size());
  for (PatternId id : subset) by_rank.emplace_back(rank_of(id), id);
  std::sort(by_rank.begin(), by_rank.end());
  std::vector<PatternId> order;
  order.reserve(by_rank.size());
  for (const auto& [rank, id] : by_rank) order.push_back(id);
  return from_order(order);
}

RankAssignment rank_by(std::span<const Scored> scores, bool higher_is_better) {
  if (scores.empty()) throw ArgumentError("cannot rank an empty pattern set");
  std::vector<Scored> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), [higher_is_better](const Scored& a, const Scored& b) {
    if (a.score != b.score) return higher_is_better ? a.score > b.score : a.score < b.score;
    return a.id < b.id;
  });
  std::vector<PatternId> order;
  order.reserve(sorted.size());
  for (const auto& s : sorted) order.push_back(s.id);
  return RankAssignment::from_order(order);
}

namespace {

void require_comparable(const RankAssignment& a, const RankAssignment& b) {
  if (!a.same_patterns(b)) throw ArgumentError("rankings cover different pattern sets");
  if (a.size() < 2) throw ArgumentError("rank statistics need at least two patterns");
}

}  // namespace

double kendall_w(const RankAssignment& a, const RankAssignment& b) {
  require_comparable(a, b);
  // Rank sums average to n+1, so α is an exact integer.
  const auto n = static_cast<std::int64_t>(a.size());
  std::int64_t alpha = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t dev = static_cast<std::int64_t>(a.ranks()[i] + b.ranks()[i]) - (n + 1);
    alpha += dev * dev;
  }
  return 3.0 * static_cast<double>(alpha) / static_cast<double>(n * n * n - n);
}

double spearman(const RankAssignment& learned, const RankAssignment& target) {
  require_comparable(learned, target);
  const auto n = static_cast<std::int64_t>(learned.size());
  std::int64_t d2 = 0;
  for (std::size_t i = 0; i < learned.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(learned.ranks()[i]) - target.ranks()[i];
    d2 += d * d;
  }
  return 1.0 - 6.0 * static_cast<double>(d2) / static_cast<double>(n * (n * n - 1));
}

double recall_at(const RankAssignment& learned, const RankAssignment& target, std::size_t k) {
  if (!learned.same_patterns(target)) throw ArgumentError("rankings cover different pattern sets");
  if (k < 1 || k > learned.size()) throw ArgumentError("k must lie in 1..n");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < learned.size(); ++i)
    if (learned.ranks()[i] <= k && target.ranks()[i] <= k) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::size_t percent_to_k(double percent, std::size_t n) {
  auto k = static_cast<std::size_t>(std::ceil(percent * static_cast<double>(n) / 100.0 - 1e-9));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

}  // namespace ahprank
