#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace ahprank {

using Item = std::uint32_t;

/// Sorted, duplicate-free set of item ids.
class Itemset {
 public:
  Itemset() = default;
  Itemset(std::initializer_list<Item> items);
  explicit Itemset(std::vector<Item> items);

  std::span<const Item> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  Item operator[](std::size_t i) const { return items_[i]; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  bool contains(Item item) const;
  bool is_subset_of(const Itemset& other) const;
  bool intersects(const Itemset& other) const;

  Itemset united(const Itemset& other) const;
  Itemset minus(const Itemset& other) const;

  std::string to_string(char sep = ' ') const;

  friend auto operator<=>(const Itemset&, const Itemset&) = default;
  friend bool operator==(const Itemset&, const Itemset&) = default;

 private:
  std::vector<Item> items_;
};

/// Immutable multiset of transactions. Frequency queries go through an
/// item -> transaction-id index built at construction.
class TransactionDB {
 public:
  TransactionDB() = default;
  explicit TransactionDB(std::vector<Itemset> transactions);

  std::size_t size() const noexcept { return transactions_.size(); }
  const std::vector<Itemset>& transactions() const noexcept { return transactions_; }
  const Itemset& operator[](std::size_t i) const { return transactions_[i]; }

  /// Items that occur in at least one transaction, ascending.
  const std::vector<Item>& items() const noexcept { return items_; }

  /// Transaction ids containing `item`, ascending. Empty for unknown items.
  std::span<const std::uint32_t> tidlist(Item item) const;

  /// Number of transactions containing every item of `x`; freq(∅) = N.
  std::size_t freq(const Itemset& x) const;

 private:
  std::vector<Itemset> transactions_;
  std::vector<Item> items_;
  std::vector<std::vector<std::uint32_t>> tidlists_;  // indexed by position in items_
};

/// Reads the FIMI transaction format: one transaction per non-empty line,
/// whitespace separated non-negative integers, LF or CRLF.
TransactionDB parse_fimi(std::istream& in);
TransactionDB parse_fimi_string(const std::string& text);
TransactionDB load_fimi(const std::string& path);

std::size_t freq(const TransactionDB& db, const Itemset& x);

}  // namespace ahprank
