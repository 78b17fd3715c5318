#include "aptmine/statistics.hpp"

#include <stdexcept>

namespace aptmine {

AptRule::AptRule(Conjunction pre, AtomId g) : precondition(std::move(pre)), consequence(g) {
  if (precondition.contains(consequence))
    throw std::invalid_argument("rule consequence " + std::to_string(consequence) + " appears in its own precondition");
}

double prior(const Thread &thread, const Formula &f) {
  std::size_t hits = 0;
  for (TimeIndex t = 1; t <= thread.t_max(); ++t)
    if (satisfies(thread, t, f)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(thread.t_max());
}

double prior(const Thread &thread, AtomId g) {
  return static_cast<double>(thread.occurrences(g).count()) / static_cast<double>(thread.t_max());
}

std::optional<Frequency> rule_frequency(const Thread &thread, const Conjunction &c, AtomId g) {
  BitSet pre = thread.conjunction_occurrences(c);
  pre &= thread.with_successor();
  const std::size_t trials = pre.count();
  if (trials == 0) return std::nullopt;
  const BitSet next = thread.occurrences(g).shifted_down(1);
  return Frequency{and_count(pre, next), trials};
}

std::optional<double> rule_probability(const Thread &thread, const Conjunction &c, AtomId g) {
  if (auto f = rule_frequency(thread, c, g)) return f->value();
  return std::nullopt;
}

std::optional<Frequency> negative_frequency(const Thread &thread, const Conjunction &c, AtomId g) {
  const BitSet &head = thread.occurrences(g);
  const std::size_t trials = head.count();
  if (trials == 0) return std::nullopt;
  const BitSet before = thread.conjunction_occurrences(c).shifted_up(1);
  return Frequency{andnot_count(before, head), trials};
}

std::optional<double> negative_probability(const Thread &thread, const Conjunction &c, AtomId g) {
  if (auto f = negative_frequency(thread, c, g)) return f->value();
  return std::nullopt;
}

std::size_t support(const Thread &thread, const Conjunction &c) { return thread.conjunction_occurrences(c).count(); }

RuleStats evaluate_rule(const Thread &thread, const AptRule &rule) {
  RuleStats s;
  s.p = rule_probability(thread, rule.precondition, rule.consequence);
  s.p_star = negative_probability(thread, rule.precondition, rule.consequence);
  s.rho = prior(thread, rule.consequence);
  s.support = support(thread, rule.precondition);
  return s;
}

} // namespace aptmine
