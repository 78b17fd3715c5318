#pragma once

#include "aptmine/core.hpp"
#include "aptmine/extraction.hpp"
#include "aptmine/statistics.hpp"

#include <optional>
#include <vector>

namespace aptmine {

/// Point probabilities of c ∧ c' ~> g and ¬c ∧ c' ~> g.
struct PairProbs {
  double p_both = 0.0;
  double p_notfirst = 0.0;
  /// ¬c ∧ c' never holds at a time point with a successor; p_notfirst is 0.
  bool never_separated = false;

  friend bool operator==(const PairProbs &, const PairProbs &) = default;
};

struct CausalScores {
  double eps_avg = 0.0;
  double eps_min = 0.0;
  double eps_frac = 0.0;
};

struct ScoredRule {
  AptRule rule;
  RuleStats stats;
  /// Empty when the rule has no related rule to compare against.
  std::optional<CausalScores> scores;
  std::size_t related_count = 0;
  /// Related rules whose comparison fell back to p_notfirst = 0.
  std::size_t never_separated_count = 0;

  bool scored() const noexcept { return scores.has_value(); }
};

struct RankedGroup {
  AtomId consequence;
  std::vector<ScoredRule> rules;
};

/// Same consequence and some t in [1, t_max-1] with c ∧ c' at t and g at t+1.
/// Throws std::invalid_argument when r == r2.
bool related(const Thread &thread, const AptRule &r, const AptRule &r2);

/// Throws std::invalid_argument when the rules are not related.
PairProbs pair_probs(const Thread &thread, const AptRule &r, const AptRule &r2);

/// Scores r against the rules of `pool` related to it (r itself is skipped).
ScoredRule causal_scores(const Thread &thread, const MinedRule &r, const std::vector<MinedRule> &pool);
ScoredRule causal_scores(const Thread &thread, const AptRule &r, const std::vector<AptRule> &pool);

/// Total ranking order: scored before unscored, then eps_avg desc, p desc,
/// support desc, precondition ascending.
bool ranks_before(const ScoredRule &a, const ScoredRule &b);

/// Groups rules by consequence, scores each rule against its own group only,
/// and keeps the top k scored rules per group. k = std::nullopt keeps the
/// whole ranked group, unscored rules included. Groups are ordered by
/// consequence id; empty groups are omitted.
std::vector<RankedGroup> pf_rule_compare(const Thread &thread, const std::vector<MinedRule> &rules,
                                         std::optional<std::size_t> k, unsigned threads = 1);

} // namespace aptmine
