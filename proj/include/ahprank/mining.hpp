#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "ahprank/dataset.hpp"

namespace ahprank {

struct FrequentItemset {
  Itemset items;
  std::size_t frequency = 0;

  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

/// X -> Y with X ∩ Y = ∅ and Y ≠ ∅.
struct AssociationRule {
  Itemset body;
  Itemset head;

  friend auto operator<=>(const AssociationRule&, const AssociationRule&) = default;
  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

/// 2x2 co-occurrence counts of a rule's body (X) and head (Y).
struct ContingencyTable {
  std::size_t f11 = 0;  // X and Y
  std::size_t f10 = 0;  // X, not Y
  std::size_t f01 = 0;  // Y, not X
  std::size_t f00 = 0;  // neither
  std::size_t n = 0;

  std::size_t fx() const noexcept { return f11 + f10; }
  std::size_t fy() const noexcept { return f11 + f01; }
  bool consistent() const noexcept { return f11 + f10 + f01 + f00 == n; }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

struct MinedRule {
  AssociationRule rule;
  std::size_t frequency = 0;  // freq(X ∪ Y)
  double confidence = 0.0;    // freq(X ∪ Y) / freq(X)
};

struct RuleOptions {
  double minconf = 0.0;
  /// Largest allowed head. 0 lifts the limit.
  std::size_t max_head = 2;
};

/// All itemsets with freq >= minsup, sorted by (size, items). The empty
/// itemset is never reported. `max_size` of 0 means unbounded.
std::vector<FrequentItemset> mine_frequent(const TransactionDB& db, std::size_t minsup,
                                           std::size_t max_size = 0);

/// Rules X -> Y built from a downward-closed frequent collection, ordered
/// lexicographically by body then head.
std::vector<MinedRule> generate_rules(const std::vector<FrequentItemset>& frequents,
                                      const TransactionDB& db, const RuleOptions& options);

ContingencyTable contingency(const TransactionDB& db, const AssociationRule& rule);

/// Relative support in (0,1] to an absolute count, rounded up, at least 1.
std::size_t absolute_support(double relative, std::size_t n_transactions);

/// body,head,frequency,confidence with items '|'-joined.
void write_rules_csv(std::ostream& out, const std::vector<MinedRule>& rules);

}  // namespace ahprank
