#include "ahprank/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ahprank/errors.hpp"

namespace ahprank {

PatternCollection::PatternCollection(std::vector<std::string> measure_names,
                                     std::vector<PatternRecord> records, ScalingMode mode)
    : names_(std::move(measure_names)), records_(std::move(records)), mode_(mode) {
  const std::size_t m = names_.size();
  if (m == 0) throw ArgumentError("a pattern collection needs at least one measure");
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.measures.size() != m)
      throw ArgumentError("pattern " + std::to_string(r.id) + " has " +
                          std::to_string(r.measures.size()) + " measures, expected " +
                          std::to_string(m));
    for (double v : r.measures)
      if (!std::isfinite(v))
        throw ArgumentError("pattern " + std::to_string(r.id) + " has a non-finite measure");
    if (!index_.emplace(r.id, i).second)
      throw ArgumentError("duplicate pattern id " + std::to_string(r.id));
  }
  if (records_.empty()) return;

  if (mode_ == ScalingMode::Identity) {
    for (auto& r : records_) r.scaled = r.measures;
    return;
  }
  std::vector<double> column(records_.size());
  for (auto& r : records_) r.scaled.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < records_.size(); ++i) column[i] = records_[i].measures[k];
    const auto scaled = minmax_scale(column);
    for (std::size_t i = 0; i < records_.size(); ++i) records_[i].scaled[k] = scaled[i];
  }
}

PatternCollection PatternCollection::from_rules(const TransactionDB& db,
                                                const std::vector<MinedRule>& rules,
                                                std::span<const MeasureId> measures,
                                                ScalingMode mode) {
  std::vector<std::string> names;
  for (MeasureId id : measures) names.emplace_back(measure_name(id));
  std::vector<PatternRecord> records;
  records.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    PatternRecord r;
    r.id = static_cast<PatternId>(i);
    r.rule = rules[i].rule;
    r.measures = measure_vector(measures, contingency(db, rules[i].rule));
    records.push_back(std::move(r));
  }
  return PatternCollection(std::move(names), std::move(records), mode);
}

const PatternRecord* PatternCollection::find(PatternId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const PatternRecord& PatternCollection::at(PatternId id) const {
  const PatternRecord* r = find(id);
  if (!r) throw ArgumentError("unknown pattern id " + std::to_string(id));
  return *r;
}

std::vector<const PatternRecord*> PatternCollection::resolve(std::span<const PatternId> ids) const {
  std::vector<const PatternRecord*> out;
  out.reserve(ids.size());
  for (PatternId id : ids) out.push_back(&at(id));
  return out;
}

PatternCollection PatternCollection::subset(std::span<const std::size_t> positions) const {
  PatternCollection out;
  out.names_ = names_;
  out.mode_ = mode_;
  out.records_.reserve(positions.size());
  for (std::size_t pos : positions) {
    out.index_.emplace(records_.at(pos).id, out.records_.size());
    out.records_.push_back(records_[pos]);
  }
  return out;
}

void write_measures_csv(std::ostream& out, const PatternCollection& patterns) {
  const auto saved_precision = out.precision(12);
  out << "id,body,head";
  for (const auto& name : patterns.measure_names()) out << ',' << name;
  for (const auto& name : patterns.measure_names()) out << ',' << name << "_scaled";
  out << '\n';
  for (const auto& r : patterns.records()) {
    out << r.id << ',' << (r.rule ? r.rule->body.to_string('|') : "") << ','
        << (r.rule ? r.rule->head.to_string('|') : "");
    for (double v : r.measures) out << ',' << v;
    for (double v : r.scaled) out << ',' << v;
    out << '\n';
  }
  out.precision(saved_precision);
}

std::vector<const PatternRecord*> pointers(std::span<const PatternRecord> records) {
  std::vector<const PatternRecord*> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(&r);
  return out;
}

void validate_ranking(const FeedbackRanking& ranking,
                      std::span<const PatternRecord* const> presented) {
  if (ranking.size() < 2) throw ArgumentError("a ranking needs at least two patterns");
  if (ranking.size() != presented.size())
    throw ArgumentError("ranking does not cover the presented patterns");
  std::unordered_set<PatternId> seen;
  for (PatternId id : ranking.order) {
    if (!seen.insert(id).second) throw ArgumentError("ranking repeats pattern " + std::to_string(id));
    const bool known = std::any_of(presented.begin(), presented.end(),
                                   [id](const PatternRecord* p) { return p->id == id; });
    if (!known) throw ArgumentError("ranking names unpresented pattern " + std::to_string(id));
  }
}

}  // namespace ahprank
