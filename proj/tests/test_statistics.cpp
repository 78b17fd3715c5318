#include "aptmine/errors.hpp"
#include "aptmine/oracle.hpp"
#include "aptmine/statistics.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace aptmine;
using oracle::kT1A;
using oracle::kT1B;
using oracle::kT1G;

TEST_CASE("fixture statistics") {
  const BuiltCorpus t1 = oracle::t1();
  const Thread &th = t1.thread;

  CHECK(prior(th, kT1G) == doctest::Approx(1.0 / 3.0));
  CHECK(prior(th, Formula::atom(kT1A) | Formula::atom(kT1B)) == doctest::Approx(4.0 / 6.0));

  CHECK(*rule_probability(th, {kT1A}, kT1G) == 0.5);
  CHECK(*rule_probability(th, {kT1B}, kT1G) == doctest::Approx(2.0 / 3.0));
  CHECK(*rule_probability(th, {kT1A, kT1B}, kT1G) == 1.0);
  CHECK(*rule_probability(th, {kT1G}, kT1A) == 0.0);

  CHECK(*rule_frequency(th, {kT1B}, kT1G) == Frequency{2, 3});

  CHECK(*negative_probability(th, {kT1A}, kT1G) == 0.5);
  CHECK(*negative_probability(th, {kT1B}, kT1G) == 0.0);
  CHECK(*negative_probability(th, {kT1A, kT1B}, kT1G) == 0.5);
  // a holds at 1 (no predecessor) and at 4 (g did not hold at 3).
  CHECK(*negative_probability(th, {kT1G}, kT1A) == 1.0);

  CHECK(support(th, {kT1A}) == 2);
  CHECK(support(th, {kT1B}) == 3);
  CHECK(support(th, {kT1A, kT1B}) == 1);
  CHECK(support(th, {kT1G}) == 2);
}

TEST_CASE("no occurrence is reported as empty") {
  // x holds only at the last time point, y never holds.
  const Thread th(3, {{0}, {1}, {2}});
  CHECK_FALSE(rule_probability(th, {2}, 0).has_value());
  CHECK(rule_probability(th, {1}, 2).value() == 1.0);

  const Thread th2(2, {{0}, {0}});
  CHECK_FALSE(negative_probability(th2, {0}, 1).has_value());
  const RuleStats st = evaluate_rule(th2, AptRule({0}, 1));
  CHECK_FALSE(st.p_star.has_value());
  CHECK(st.p.value() == 0.0);
  CHECK(st.rho == 0.0);
}

TEST_CASE("a rule cannot predict its own precondition atom") {
  CHECK_THROWS_AS(AptRule({1, 2}, 2), std::invalid_argument);
  CHECK(AptRule({1}, 0) < AptRule({0}, 1));
  CHECK(AptRule({0}, 1) < AptRule({0, 2}, 1));
}

TEST_CASE("evaluate_rule matches the exact oracle on random threads") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto rc = testing::random_case(seed);
    const Thread &th = rc.corpus.thread;
    const std::size_t n = th.atom_count();
    for (AtomId g = 0; g < n; ++g) {
      for (AtomId a = 0; a < n; ++a) {
        if (a == g) continue;
        for (AtomId b = a; b < n; ++b) {
          if (b == g) continue;
          const Conjunction c = a == b ? Conjunction{a} : Conjunction{a, b};
          const RuleStats st = evaluate_rule(th, AptRule(c, g));
          const oracle::ExactStats ex = oracle::exact_stats(th, c, g);
          REQUIRE(st.p.has_value() == ex.p.has_value());
          if (st.p) CHECK(std::abs(*st.p - ex.p->value()) <= 1e-12);
          REQUIRE(st.p_star.has_value() == ex.p_star.has_value());
          if (st.p_star) CHECK(std::abs(*st.p_star - ex.p_star->value()) <= 1e-12);
          CHECK(std::abs(st.rho - ex.rho.value()) <= 1e-12);
          CHECK(st.support == ex.support);
        }
      }
    }
  }
}

TEST_CASE("support is antitone in the precondition") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rc = testing::random_case(seed);
    const Thread &th = rc.corpus.thread;
    const std::size_t n = th.atom_count();
    for (AtomId a = 0; a < n; ++a)
      for (AtomId b = 0; b < n; ++b) {
        const Conjunction small{a};
        const Conjunction big{a, b};
        CHECK(support(th, big) <= support(th, small));
        const auto p = rule_probability(th, small, b);
        if (p) CHECK((*p >= 0.0 && *p <= 1.0));
      }
  }
}

TEST_CASE("probabilities are in the unit interval") {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    const auto rc = testing::random_case(seed);
    const Thread &th = rc.corpus.thread;
    for (AtomId g : rc.corpus.registry.action_atoms())
      for (AtomId a = 0; a < th.atom_count(); ++a) {
        if (a == g) continue;
        const RuleStats st = evaluate_rule(th, AptRule({a}, g));
        if (st.p) CHECK((*st.p >= 0.0 && *st.p <= 1.0));
        if (st.p_star) CHECK((*st.p_star >= 0.0 && *st.p_star <= 1.0));
        CHECK((st.rho >= 0.0 && st.rho <= 1.0));
      }
  }
}
