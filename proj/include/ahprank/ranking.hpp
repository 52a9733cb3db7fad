#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ahprank {

using PatternId = std::uint32_t;

struct Scored {
  PatternId id;
  double score;
};

/// Strict ranking of a set of patterns: a bijection from ids onto 1..n.
class RankAssignment {
 public:
  RankAssignment() = default;

  /// `order` lists ids best first; ids must be distinct.
  static RankAssignment from_order(std::span<const PatternId> order);

  std::size_t size() const noexcept { return ids_.size(); }

  /// Ids ascending, and ranks parallel to them.
  std::span<const PatternId> ids() const noexcept { return ids_; }
  std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }

  /// Throws ArgumentError for ids outside the assignment.
  std::uint32_t rank_of(PatternId id) const;
  bool contains(PatternId id) const;

  /// Ids best first.
  std::vector<PatternId> order() const;

  /// The same set re-ranked 1..|subset| by the relative order here.
  RankAssignment restricted_to(std::span<const PatternId> subset) const;

  bool same_patterns(const RankAssignment& other) const { return ids_ == other.ids_; }

  friend bool operator==(const RankAssignment&, const RankAssignment&) = default;

 private:
  std::vector<PatternId> ids_;
  std::vector<std::uint32_t> ranks_;
};

/// Rank 1 is the best score; ties go to the smaller id.
RankAssignment rank_by(std::span<const Scored> scores, bool higher_is_better = true);

/// Two-judge Kendall's W over rank sums: 3·Σ(R−R̄)² / (n³−n).
double kendall_w(const RankAssignment& a, const RankAssignment& b);

double spearman(const RankAssignment& learned, const RankAssignment& target);

/// Fraction of the target's top-k also in the learned top-k.
double recall_at(const RankAssignment& learned, const RankAssignment& target, std::size_t k);

/// k = ceil(percent·n/100), at least 1.
std::size_t percent_to_k(double percent, std::size_t n);

}  // namespace ahprank
