#pragma once

#include "aptmine/core.hpp"
#include "aptmine/statistics.hpp"

#include <cstdint>
#include <vector>

namespace aptmine {

struct ExtractParams {
  std::size_t max_dim = 3;
  std::size_t supp_lb = 3;
  double min_prob = 0.5;

  void validate() const;
};

struct MinedRule {
  AptRule rule;
  RuleStats stats;

  friend bool operator==(const MinedRule &, const MinedRule &) = default;
};

struct ExtractionReport {
  /// Sorted by consequence, then precondition.
  std::vector<MinedRule> rules;
  /// Distinct (precondition, consequence) pairs whose statistics were evaluated.
  std::uint64_t combinations_explored = 0;
  /// Subsets generated before cross-period deduplication.
  std::uint64_t combinations_enumerated = 0;
  /// Pairs an unpruned enumeration of every environmental subset up to
  /// max_dim would evaluate, for the same set of consequences.
  std::uint64_t naive_combinations = 0;
  /// |Θ[t] ∩ A_env| per period (index 0 is t = 1).
  std::vector<std::size_t> active_atom_counts;
  /// |Θ[t] ∩ frequent A_env| per period.
  std::vector<std::size_t> candidate_atom_counts;

  std::size_t max_active_atoms() const;
  std::size_t max_candidate_atoms() const;
};

/// sum_{k=1..max_k} C(n, k), saturating at UINT64_MAX.
std::uint64_t combinations_up_to(std::uint64_t n, std::uint64_t max_k);

/// Environmental atoms holding at least supp_lb times, sorted ascending.
std::vector<AtomId> frequent_env_atoms(const Thread &thread, const AtomRegistry &registry, std::size_t supp_lb);

/// Every subset of size 1..max_dim of (Θ[t] ∩ frequent) \ {g}, over the t in
/// [1, t_max-1] with Θ[t+1] |= g; deduplicated and sorted. `frequent` must be
/// sorted. Throws EmptyConsequence if g never holds.
std::vector<Conjunction> candidate_preconditions(const Thread &thread, AtomId g, const ExtractParams &params,
                                                 const std::vector<AtomId> &frequent);

/// Mines every rule c ~> g with g an action atom that occurs, c drawn from
/// candidate_preconditions, and s >= supp_lb, p > rho, p >= min_prob.
/// Consequences are processed on up to `threads` workers (0 = all cores); the
/// report is identical for any thread count.
ExtractionReport pf_rule_extract(const Thread &thread, const AtomRegistry &registry, const ExtractParams &params,
                                 unsigned threads = 1);

} // namespace aptmine
