#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ahprank/measures.hpp"
#include "ahprank/mining.hpp"
#include "ahprank/ranking.hpp"

namespace ahprank {

enum class ScalingMode { MinMax, Identity };

/// A rankable pattern: an optional association rule and its measure values.
/// `scaled` is what the aggregation sees; `measures` are the raw values.
struct PatternRecord {
  PatternId id = 0;
  std::optional<AssociationRule> rule;
  std::vector<double> measures;
  std::vector<double> scaled;
};

/// Most-preferred first.
struct FeedbackRanking {
  std::vector<PatternId> order;

  std::size_t size() const noexcept { return order.size(); }
  friend bool operator==(const FeedbackRanking&, const FeedbackRanking&) = default;
};

/// Patterns under a fixed measure set. Scaling is applied once, column-wise
/// over the whole collection.
class PatternCollection {
 public:
  PatternCollection() = default;
  PatternCollection(std::vector<std::string> measure_names, std::vector<PatternRecord> records,
                    ScalingMode mode = ScalingMode::MinMax);

  /// One record per rule, ids 0..n-1 in rule order.
  static PatternCollection from_rules(const TransactionDB& db, const std::vector<MinedRule>& rules,
                                      std::span<const MeasureId> measures,
                                      ScalingMode mode = ScalingMode::MinMax);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t criteria() const noexcept { return names_.size(); }
  const std::vector<std::string>& measure_names() const noexcept { return names_; }
  ScalingMode scaling() const noexcept { return mode_; }

  std::span<const PatternRecord> records() const noexcept { return records_; }
  const PatternRecord& operator[](std::size_t i) const { return records_[i]; }

  /// nullptr when the id is unknown.
  const PatternRecord* find(PatternId id) const;
  const PatternRecord& at(PatternId id) const;

  /// Records with the given ids in that order; throws on unknown ids.
  std::vector<const PatternRecord*> resolve(std::span<const PatternId> ids) const;

  /// Subset keeping ids and the already computed scaled values.
  PatternCollection subset(std::span<const std::size_t> positions) const;

 private:
  std::vector<std::string> names_;
  std::vector<PatternRecord> records_;
  std::unordered_map<PatternId, std::size_t> index_;
  ScalingMode mode_ = ScalingMode::MinMax;
};

/// id,body,head, then one raw column per measure and one "<name>_scaled"
/// column per measure.
void write_measures_csv(std::ostream& out, const PatternCollection& patterns);

std::vector<const PatternRecord*> pointers(std::span<const PatternRecord> records);

/// Throws ArgumentError unless `ranking` is a duplicate-free permutation of
/// the presented ids with at least two entries.
void validate_ranking(const FeedbackRanking& ranking,
                      std::span<const PatternRecord* const> presented);

/// Source of user preferences: an emulator or a live human.
class FeedbackOracle {
 public:
  virtual ~FeedbackOracle() = default;

  /// Ranks the presented patterns best first. An empty optional means the
  /// user stopped answering.
  virtual std::optional<FeedbackRanking> rank(std::span<const PatternRecord* const> patterns) = 0;

  /// Noise-free ranking under the preference currently in force. Used for
  /// evaluation; never advances oracle state.
  virtual FeedbackRanking target(std::span<const PatternRecord* const> patterns) const = 0;
};

}  // namespace ahprank
