#pragma once

#include "aptmine/core.hpp"

#include <cstddef>
#include <optional>

namespace aptmine {

/// A rule c ~> g: when c holds at t, g holds at t+1.
struct AptRule {
  /// Throws std::invalid_argument when the consequence is one of the
  /// precondition atoms.
  AptRule(Conjunction precondition, AtomId consequence);

  Conjunction precondition;
  AtomId consequence;

  friend bool operator==(const AptRule &, const AptRule &) = default;
  /// Orders by consequence, then precondition.
  friend std::strong_ordering operator<=>(const AptRule &a, const AptRule &b) {
    if (auto c = a.consequence <=> b.consequence; c != 0) return c;
    return a.precondition <=> b.precondition;
  }
};

/// hits / trials with trials >= 1.
struct Frequency {
  std::size_t hits = 0;
  std::size_t trials = 0;

  double value() const noexcept { return static_cast<double>(hits) / static_cast<double>(trials); }
  friend bool operator==(const Frequency &, const Frequency &) = default;
};

/// Fraction of time points satisfying f.
double prior(const Thread &thread, const Formula &f);
double prior(const Thread &thread, AtomId g);

/// Over t in [1, t_max-1] with Θ[t] |= c: how often Θ[t+1] |= g.
/// std::nullopt (no occurrence) when c never holds at a time point that has a
/// successor.
std::optional<Frequency> rule_frequency(const Thread &thread, const Conjunction &c, AtomId g);
std::optional<double> rule_probability(const Thread &thread, const Conjunction &c, AtomId g);

/// Over t with Θ[t] |= g: how often c did not hold at t-1. The first time
/// point has no predecessor and always counts. std::nullopt when g never occurs.
std::optional<Frequency> negative_frequency(const Thread &thread, const Conjunction &c, AtomId g);
std::optional<double> negative_probability(const Thread &thread, const Conjunction &c, AtomId g);

/// Number of time points in [1, t_max] where c holds.
std::size_t support(const Thread &thread, const Conjunction &c);

struct RuleStats {
  std::optional<double> p;      ///< empty: precondition has no occurrence with a successor
  std::optional<double> p_star; ///< empty: consequence never occurs
  double rho = 0.0;
  std::size_t support = 0;

  bool has_probability() const noexcept { return p.has_value(); }
  friend bool operator==(const RuleStats &, const RuleStats &) = default;
};

RuleStats evaluate_rule(const Thread &thread, const AptRule &rule);

} // namespace aptmine
