#include "aptmine/errors.hpp"
#include "aptmine/extraction.hpp"
#include "aptmine/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace aptmine;
using oracle::kT1A;
using oracle::kT1B;
using oracle::kT1G;

namespace {

std::vector<AptRule> rules_of(const ExtractionReport &r) {
  std::vector<AptRule> out;
  for (const auto &m : r.rules) out.push_back(m.rule);
  return out;
}

} // namespace

TEST_CASE("combination counts") {
  CHECK(combinations_up_to(980, 3) == 156'866'150);
  CHECK(combinations_up_to(93, 3) == 134'137);
  CHECK(combinations_up_to(49, 3) == 19'649);
  CHECK(combinations_up_to(2, 3) == 3);
  CHECK(combinations_up_to(0, 3) == 0);
  CHECK(combinations_up_to(1'000'000, 10) == UINT64_MAX);
}

TEST_CASE("frequent atoms and candidates on the fixture") {
  const BuiltCorpus t1 = oracle::t1();
  CHECK(frequent_env_atoms(t1.thread, t1.registry, 3) == std::vector<AtomId>{kT1B});
  CHECK(frequent_env_atoms(t1.thread, t1.registry, 1) == std::vector<AtomId>{kT1A, kT1B, kT1G});

  ExtractParams params{2, 1, 0.5};
  const std::vector<AtomId> all{kT1A, kT1B, kT1G};
  CHECK(candidate_preconditions(t1.thread, kT1G, params, all) ==
        std::vector<Conjunction>{{kT1A}, {kT1A, kT1B}, {kT1B}});
  CHECK(candidate_preconditions(t1.thread, kT1A, params, all) == std::vector<Conjunction>{{kT1B}});
  params.max_dim = 1;
  CHECK(candidate_preconditions(t1.thread, kT1G, params, all) == std::vector<Conjunction>{{kT1A}, {kT1B}});

  const Thread never(2, {{0}, {0}});
  CHECK_THROWS_AS(candidate_preconditions(never, 1, params, {0}), EmptyConsequence);
}

TEST_CASE("fixture extraction under several filters") {
  const BuiltCorpus t1 = oracle::t1();
  const auto run = [&](std::size_t max_dim, std::size_t supp_lb, double min_prob) {
    return rules_of(pf_rule_extract(t1.thread, t1.registry, ExtractParams{max_dim, supp_lb, min_prob}));
  };
  CHECK(run(2, 1, 0.5) ==
        std::vector<AptRule>{AptRule({kT1A}, kT1G), AptRule({kT1A, kT1B}, kT1G), AptRule({kT1B}, kT1G)});
  CHECK(run(2, 1, 0.7) == std::vector<AptRule>{AptRule({kT1A, kT1B}, kT1G)});
  CHECK(run(3, 3, 0.5) == std::vector<AptRule>{AptRule({kT1B}, kT1G)});
  CHECK(run(3, 3, 0.7).empty());

  const auto report = pf_rule_extract(t1.thread, t1.registry, ExtractParams{2, 1, 0.5});
  REQUIRE(report.rules.size() == 3);
  const RuleStats &ab = report.rules[1].stats;
  CHECK(*ab.p == 1.0);
  CHECK(*ab.p_star == 0.5);
  CHECK(ab.rho == doctest::Approx(1.0 / 3.0));
  CHECK(ab.support == 1);
  CHECK(report.combinations_explored == 3);
  CHECK(report.naive_combinations == combinations_up_to(2, 2));
  CHECK(report.active_atom_counts == std::vector<std::size_t>{2, 1, 1, 2, 1, 0});
}

TEST_CASE("parameter validation") {
  const BuiltCorpus t1 = oracle::t1();
  CHECK_THROWS_AS(pf_rule_extract(t1.thread, t1.registry, ExtractParams{0, 1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(pf_rule_extract(t1.thread, t1.registry, ExtractParams{1, 0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(pf_rule_extract(t1.thread, t1.registry, ExtractParams{1, 1, 1.5}), std::invalid_argument);
}

TEST_CASE("no action atoms yields no rules") {
  AtomRegistry reg;
  reg.intern("x", {});
  reg.intern("y", {});
  const Thread th(2, {{0}, {1}, {0, 1}});
  const auto report = pf_rule_extract(th, reg, ExtractParams{2, 1, 0.0});
  CHECK(report.rules.empty());
  CHECK(report.naive_combinations == 0);
}

TEST_CASE("extraction equals brute force and is prima facie") {
  for (std::uint64_t seed = 1000; seed < 1150; ++seed) {
    const auto rc = testing::random_case(seed);
    const auto fast = pf_rule_extract(rc.corpus.thread, rc.corpus.registry, rc.params);
    const auto slow = oracle::brute_force_extract(rc.corpus.thread, rc.corpus.registry, rc.params);
    CHECK(rules_of(fast) == rules_of(slow));
    for (const auto &m : fast.rules) {
      CHECK(oracle::is_prima_facie(rc.corpus.thread, m.rule.precondition, m.rule.consequence));
      CHECK(m.stats.support >= rc.params.supp_lb);
      CHECK(*m.stats.p >= rc.params.min_prob);
      CHECK(m.rule.precondition.size() <= rc.params.max_dim);
    }
    CHECK(fast.combinations_explored <= fast.naive_combinations);
    CHECK(fast.combinations_explored <= fast.combinations_enumerated);
  }
}

TEST_CASE("extraction is deterministic across worker counts") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rc = testing::random_case(seed);
    const auto one = pf_rule_extract(rc.corpus.thread, rc.corpus.registry, rc.params, 1);
    const auto four = pf_rule_extract(rc.corpus.thread, rc.corpus.registry, rc.params, 4);
    CHECK(one.rules == four.rules);
    CHECK(one.combinations_explored == four.combinations_explored);
  }
}
