#include "ahprank/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ahprank/errors.hpp"

namespace ahprank {

Itemset::Itemset(std::initializer_list<Item> items) : Itemset(std::vector<Item>(items)) {}

Itemset::Itemset(std::vector<Item> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool Itemset::contains(Item item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

bool Itemset::is_subset_of(const Itemset& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

bool Itemset::intersects(const Itemset& other) const {
  auto a = items_.begin();
  auto b = other.items_.begin();
  while (a != items_.end() && b != other.items_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a;
    else ++b;
  }
  return false;
}

Itemset Itemset::united(const Itemset& other) const {
  std::vector<Item> out;
  out.reserve(items_.size() + other.items_.size());
  std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                 std::back_inserter(out));
  Itemset result;
  result.items_ = std::move(out);
  return result;
}

Itemset Itemset::minus(const Itemset& other) const {
  std::vector<Item> out;
  std::set_difference(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                      std::back_inserter(out));
  Itemset result;
  result.items_ = std::move(out);
  return result;
}

std::string Itemset::to_string(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(items_[i]);
  }
  return out;
}

TransactionDB::TransactionDB(std::vector<Itemset> transactions)
    : transactions_(std::move(transactions)) {
  for (const auto& t : transactions_) items_.insert(items_.end(), t.begin(), t.end());
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());

  tidlists_.resize(items_.size());
  for (std::uint32_t tid = 0; tid < transactions_.size(); ++tid) {
    for (Item item : transactions_[tid]) {
      auto pos = std::lower_bound(items_.begin(), items_.end(), item) - items_.begin();
      tidlists_[pos].push_back(tid);
    }
  }
}

std::span<const std::uint32_t> TransactionDB::tidlist(Item item) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it == items_.end() || *it != item) return {};
  return tidlists_[it - items_.begin()];
}

std::size_t TransactionDB::freq(const Itemset& x) const {
  if (x.empty()) return transactions_.size();

  std::vector<std::span<const std::uint32_t>> lists;
  lists.reserve(x.size());
  for (Item item : x) {
    auto tids = tidlist(item);
    if (tids.empty()) return 0;
    lists.push_back(tids);
  }
  std::sort(lists.begin(), lists.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::vector<std::uint32_t> acc(lists[0].begin(), lists[0].end());
  std::vector<std::uint32_t> tmp;
  for (std::size_t i = 1; i < lists.size() && !acc.empty(); ++i) {
    tmp.clear();
    std::set_intersection(acc.begin(), acc.end(), lists[i].begin(), lists[i].end(),
                          std::back_inserter(tmp));
    acc.swap(tmp);
  }
  return acc.size();
}

std::size_t freq(const TransactionDB& db, const Itemset& x) { return db.freq(x); }

TransactionDB parse_fimi(std::istream& in) {
  std::vector<Itemset> transactions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Item> items;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;

      Item value = 0;
      auto [end, ec] = std::from_chars(line.data() + i, line.data() + j, value);
      if (ec != std::errc{} || end != line.data() + j)
        throw ParseError("invalid item token '" + line.substr(i, j - i) + "'", lineno);
      items.push_back(value);
      i = j;
    }
    if (!items.empty()) transactions.emplace_back(std::move(items));
  }
  return TransactionDB(std::move(transactions));
}

TransactionDB parse_fimi_string(const std::string& text) {
  std::istringstream in(text);
  return parse_fimi(in);
}

TransactionDB load_fimi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open dataset '" + path + "'");
  return parse_fimi(in);
}

}  // namespace ahprank
