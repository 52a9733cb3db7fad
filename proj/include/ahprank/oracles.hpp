#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <unordered_map>
#include <span>
#include <vector>

#include <json.hpp>

#include "ahprank/ahp.hpp"
#include "ahprank/dataset.hpp"
#include "ahprank/pattern.hpp"

namespace ahprank {

/// Orders patterns by a fixed scoring rule; `rank` and `target` agree.
class ScoringOracle : public FeedbackOracle {
 public:
  std::optional<FeedbackRanking> rank(std::span<const PatternRecord* const> patterns) override;
  FeedbackRanking target(std::span<const PatternRecord* const> patterns) const override;

 protected:
  /// Strict preference; ids break full ties outside this function.
  virtual bool prefers(const PatternRecord& a, const PatternRecord& b) const = 0;
  virtual FeedbackRanking ordered(std::span<const PatternRecord* const> patterns) const;
};

/// Linear target Σ w_i·scaled_i with frozen weights.
class RandEmulator : public ScoringOracle {
 public:
  explicit RandEmulator(WeightVector weights);

  /// Weights drawn uniformly in [0,1] per measure, then normalized.
  static RandEmulator random(std::size_t criteria, std::uint64_t seed);

  const WeightVector& weights() const noexcept { return weights_; }

 protected:
  bool prefers(const PatternRecord& a, const PatternRecord& b) const override;

 private:
  WeightVector weights_;
};

/// Lexicographic order over raw measure values.
class LexEmulator : public ScoringOracle {
 public:
  explicit LexEmulator(std::vector<std::size_t> order);

  static LexEmulator random(std::size_t criteria, std::uint64_t seed);

  const std::vector<std::size_t>& order() const noexcept { return order_; }

 protected:
  bool prefers(const PatternRecord& a, const PatternRecord& b) const override;

 private:
  std::vector<std::size_t> order_;
};

/// χ² of X→Y against the transaction database; 0 when freq(X)·freq(Y) = 0.
double chi_squared(const TransactionDB& db, const AssociationRule& rule);

/// Ranks rules by descending χ². Every presented pattern must carry a rule.
class ChiEmulator : public ScoringOracle {
 public:
  explicit ChiEmulator(std::shared_ptr<const TransactionDB> db);

  double score(const PatternRecord& p) const;

 protected:
  bool prefers(const PatternRecord& a, const PatternRecord& b) const override;
  FeedbackRanking ordered(std::span<const PatternRecord* const> patterns) const override;

 private:
  struct Cached {
    AssociationRule rule;
    double chi;
  };
  std::shared_ptr<const TransactionDB> db_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<PatternId, Cached> cache_;
};

/// Reverses each answer with probability `err`. Mistakes are permanent:
/// the learner never sees a correction.
class MistakeOracle : public FeedbackOracle {
 public:
  MistakeOracle(std::unique_ptr<FeedbackOracle> inner, double err, std::uint64_t seed);

  std::optional<FeedbackRanking> rank(std::span<const PatternRecord* const> patterns) override;
  FeedbackRanking target(std::span<const PatternRecord* const> patterns) const override;

  std::size_t flips() const noexcept { return flips_; }

 private:
  std::unique_ptr<FeedbackOracle> inner_;
  double err_;
  std::mt19937_64 rng_;
  std::size_t flips_ = 0;
};

/// Answers the first `switch_after` queries with `first`, the rest with
/// `second`.
class SwapOracle : public FeedbackOracle {
 public:
  SwapOracle(std::unique_ptr<FeedbackOracle> first, std::unique_ptr<FeedbackOracle> second,
             std::size_t switch_after);

  std::optional<FeedbackRanking> rank(std::span<const PatternRecord* const> patterns) override;
  FeedbackRanking target(std::span<const PatternRecord* const> patterns) const override;

  std::size_t answered() const noexcept { return answered_; }

 private:
  const FeedbackOracle& current() const;

  std::unique_ptr<FeedbackOracle> first_;
  std::unique_ptr<FeedbackOracle> second_;
  std::size_t switch_after_;
  std::size_t answered_ = 0;
};

/// Replays recorded preferences: answer t puts `preferred[t]` first.
/// Aborts once the script is exhausted. Has no notion of a target.
class ScriptedOracle : public FeedbackOracle {
 public:
  explicit ScriptedOracle(std::vector<PatternId> preferred);

  std::optional<FeedbackRanking> rank(std::span<const PatternRecord* const> patterns) override;
  FeedbackRanking target(std::span<const PatternRecord* const> patterns) const override;

 private:
  std::vector<PatternId> preferred_;
  std::size_t next_ = 0;
};

std::unique_ptr<FeedbackOracle> rand_emu(WeightVector weights);
std::unique_ptr<FeedbackOracle> lex_emu(std::vector<std::size_t> order);
std::unique_ptr<FeedbackOracle> chi_emu(std::shared_ptr<const TransactionDB> db);
std::unique_ptr<FeedbackOracle> with_mistakes(std::unique_ptr<FeedbackOracle> inner, double err,
                                              std::uint64_t seed);
std::unique_ptr<FeedbackOracle> with_swap(std::unique_ptr<FeedbackOracle> first,
                                          std::unique_ptr<FeedbackOracle> second,
                                          std::size_t switch_after);

/// Builds an oracle from a serializable description:
///   {"kind":"rand","seed":7}            or {"kind":"rand","weights":[...]}
///   {"kind":"lex","seed":7}             or {"kind":"lex","order":[...]}
///   {"kind":"chi"}
///   {"kind":"swap","first":{...},"second":{...},"after":10}
/// Any spec may add "err" and "err_seed" to wrap it with mistakes. `db` is
/// required for chi.
std::unique_ptr<FeedbackOracle> make_oracle(const nlohmann::json& spec, std::size_t criteria,
                                            std::shared_ptr<const TransactionDB> db);

}  // namespace ahprank
