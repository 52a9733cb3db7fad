#include "ahprank/mining.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "ahprank/errors.hpp"

namespace ahprank {
namespace {

using Tids = std::vector<std::uint32_t>;

Tids intersect(const Tids& a, std::span<const std::uint32_t> b) {
  Tids out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Depth-first prefix extension over vertical tid-lists (Eclat).
void extend(const TransactionDB& db, const std::vector<Item>& candidates, std::size_t start,
            std::vector<Item>& prefix, const Tids& prefix_tids, std::size_t minsup,
            std::size_t max_size, std::vector<FrequentItemset>& out) {
  if (max_size != 0 && prefix.size() >= max_size) return;
  for (std::size_t i = start; i < candidates.size(); ++i) {
    Tids tids = intersect(prefix_tids, db.tidlist(candidates[i]));
    if (tids.size() < minsup) continue;
    prefix.push_back(candidates[i]);
    out.push_back({Itemset(prefix), tids.size()});
    extend(db, candidates, i + 1, prefix, tids, minsup, max_size, out);
    prefix.pop_back();
  }
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<FrequentItemset> mine_frequent(const TransactionDB& db, std::size_t minsup,
                                           std::size_t max_size) {
  if (minsup < 1) throw ArgumentError("minsup must be at least 1");

  std::vector<Item> candidates;
  for (Item item : db.items())
    if (db.tidlist(item).size() >= minsup) candidates.push_back(item);

  Tids all(db.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;

  std::vector<FrequentItemset> out;
  std::vector<Item> prefix;
  extend(db, candidates, 0, prefix, all, minsup, max_size, out);

  std::sort(out.begin(), out.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return out;
}

std::vector<MinedRule> generate_rules(const std::vector<FrequentItemset>& frequents,
                                      const TransactionDB& db, const RuleOptions& options) {
  if (!(options.minconf >= 0.0 && options.minconf <= 1.0))
    throw ArgumentError("minconf must lie in [0,1]");

  std::map<Itemset, std::size_t> counts;
  for (const auto& f : frequents) counts.emplace(f.items, f.frequency);
  auto count_of = [&](const Itemset& x) {
    auto it = counts.find(x);
    return it != counts.end() ? it->second : db.freq(x);
  };

  std::vector<MinedRule> rules;
  for (const auto& f : frequents) {
    const std::size_t size = f.items.size();
    if (size < 2) continue;
    std::size_t max_head = size - 1;
    if (options.max_head != 0) max_head = std::min(max_head, options.max_head);

    for (std::size_t k = 1; k <= max_head; ++k) {
      for_each_combination(size, k, [&](const std::vector<std::size_t>& idx) {
        std::vector<Item> head_items;
        for (std::size_t i : idx) head_items.push_back(f.items[i]);
        Itemset head(std::move(head_items));
        Itemset body = f.items.minus(head);
        const std::size_t body_freq = count_of(body);
        const double conf =
            body_freq == 0 ? 0.0
                           : static_cast<double>(f.frequency) / static_cast<double>(body_freq);
        if (conf >= options.minconf)
          rules.push_back({{std::move(body), std::move(head)}, f.frequency, conf});
      });
    }
  }
  std::sort(rules.begin(), rules.end(),
            [](const MinedRule& a, const MinedRule& b) { return a.rule < b.rule; });
  return rules;
}

ContingencyTable contingency(const TransactionDB& db, const AssociationRule& rule) {
  const std::size_t n = db.size();
  const std::size_t fxy = db.freq(rule.body.united(rule.head));
  const std::size_t fx = db.freq(rule.body);
  const std::size_t fy = db.freq(rule.head);
  ContingencyTable t;
  t.n = n;
  t.f11 = fxy;
  t.f10 = fx - fxy;
  t.f01 = fy - fxy;
  t.f00 = n - fx - fy + fxy;
  return t;
}

std::size_t absolute_support(double relative, std::size_t n_transactions) {
  if (!(relative > 0.0 && relative <= 1.0))
    throw ArgumentError("relative support must lie in (0,1]");
  // Guard against 0.1 * 30 = 3.0000000000000004 style overshoot.
  const double raw = relative * static_cast<double>(n_transactions);
  auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::max<std::size_t>(count, 1);
}

void write_rules_csv(std::ostream& out, const std::vector<MinedRule>& rules) {
  const auto saved_precision = out.precision(12);
  out << "body,head,frequency,confidence\n";
  for (const auto& r : rules) {
    out << r.rule.body.to_string('|') << ',' << r.rule.head.to_string('|') << ','
        << r.frequency << ',' << r.confidence << '\n';
  }
  out.precision(saved_precision);
}

}  // namespace ahprank
