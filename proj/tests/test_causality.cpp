#include "aptmine/causality.hpp"
#include "aptmine/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace aptmine;
using oracle::kT1A;
using oracle::kT1B;
using oracle::kT1G;

namespace {

std::vector<MinedRule> fixture_rules(const BuiltCorpus &t1) {
  return pf_rule_extract(t1.thread, t1.registry, ExtractParams{2, 1, 0.5}).rules;
}

const ScoredRule &find(const std::vector<ScoredRule> &rs, const Conjunction &c) {
  return *std::find_if(rs.begin(), rs.end(), [&](const ScoredRule &s) { return s.rule.precondition == c; });
}

} // namespace

TEST_CASE("relatedness and pair probabilities on the fixture") {
  const BuiltCorpus t1 = oracle::t1();
  const AptRule a({kT1A}, kT1G), b({kT1B}, kT1G), ab({kT1A, kT1B}, kT1G), b_to_a({kT1B}, kT1A);
  CHECK(related(t1.thread, a, b));
  CHECK(related(t1.thread, b, a));
  CHECK_FALSE(related(t1.thread, b, b_to_a));
  CHECK_THROWS_AS(related(t1.thread, a, a), std::invalid_argument);

  const PairProbs pab = pair_probs(t1.thread, a, b);
  CHECK(pab.p_both == 1.0);
  CHECK(pab.p_notfirst == 0.5);
  CHECK_FALSE(pab.never_separated);

  const PairProbs pba = pair_probs(t1.thread, b, a);
  CHECK(pba.p_notfirst == 0.0);
  CHECK_FALSE(pba.never_separated);

  const PairProbs p_a_ab = pair_probs(t1.thread, a, ab);
  CHECK(p_a_ab.p_both == 1.0);
  CHECK(p_a_ab.p_notfirst == 0.0);
  CHECK(p_a_ab.never_separated);

  CHECK_THROWS_AS(pair_probs(t1.thread, b, b_to_a), std::invalid_argument);
}

TEST_CASE("fixture scores") {
  const BuiltCorpus t1 = oracle::t1();
  const auto rules = fixture_rules(t1);
  REQUIRE(rules.size() == 3);

  const ScoredRule sa = causal_scores(t1.thread, rules[0], rules);
  REQUIRE(sa.scored());
  CHECK(sa.scores->eps_avg == 0.75);
  CHECK(sa.scores->eps_min == 0.5);
  CHECK(sa.scores->eps_frac == 1.0);
  CHECK(sa.related_count == 2);
  CHECK(sa.never_separated_count == 1);

  const ScoredRule sab = causal_scores(t1.thread, rules[1], rules);
  CHECK(sab.scores->eps_avg == 0.75);
  CHECK(sab.scores->eps_min == 0.5);
  CHECK(sab.never_separated_count == 0);

  const ScoredRule sb = causal_scores(t1.thread, rules[2], rules);
  CHECK(sb.scores->eps_avg == 1.0);
  CHECK(sb.scores->eps_min == 1.0);
  CHECK(sb.never_separated_count == 1);

  // Two-rule pool.
  const std::vector<AptRule> pool{AptRule({kT1A}, kT1G), AptRule({kT1B}, kT1G)};
  CHECK(causal_scores(t1.thread, pool[0], pool).scores->eps_avg == 0.5);
  CHECK(causal_scores(t1.thread, pool[1], pool).scores->eps_avg == 1.0);

  // Alone: nothing to compare with.
  const ScoredRule lone = causal_scores(t1.thread, pool[0], std::vector<AptRule>{pool[0]});
  CHECK_FALSE(lone.scored());
  CHECK(lone.related_count == 0);
}

TEST_CASE("ranking and top-k") {
  const BuiltCorpus t1 = oracle::t1();
  const auto rules = fixture_rules(t1);

  const auto all = pf_rule_compare(t1.thread, rules, std::nullopt);
  REQUIRE(all.size() == 1);
  CHECK(all[0].consequence == kT1G);
  REQUIRE(all[0].rules.size() == 3);
  CHECK(all[0].rules[0].rule.precondition == Conjunction{kT1B});
  // Tie on eps_avg broken by p.
  CHECK(all[0].rules[1].rule.precondition == Conjunction{kT1A, kT1B});
  CHECK(all[0].rules[2].rule.precondition == Conjunction{kT1A});

  const auto top1 = pf_rule_compare(t1.thread, rules, 1);
  REQUIRE(top1[0].rules.size() == 1);
  CHECK(top1[0].rules[0].rule == AptRule({kT1B}, kT1G));
  CHECK(top1[0].rules[0].scores->eps_avg == 1.0);

  CHECK(pf_rule_compare(t1.thread, {}, 3).empty());
  const auto lone = pf_rule_compare(t1.thread, {rules[0]}, std::nullopt);
  REQUIRE(lone[0].rules.size() == 1);
  CHECK_FALSE(lone[0].rules[0].scored());
  const auto lone_k = pf_rule_compare(t1.thread, {rules[0]}, 5);
  CHECK(lone_k[0].rules.empty());
}

TEST_CASE("group scores match the all-pairs oracle") {
  for (std::uint64_t seed = 2000; seed < 2150; ++seed) {
    const auto rc = testing::random_case(seed);
    const Thread &th = rc.corpus.thread;
    const auto rules = pf_rule_extract(th, rc.corpus.registry, rc.params).rules;
    const auto groups = pf_rule_compare(th, rules, std::nullopt);
    const auto expected = oracle::brute_force_scores(th, rules);
    for (const auto &o : expected) {
      const auto &grp = *std::find_if(groups.begin(), groups.end(),
                                      [&](const RankedGroup &g) { return g.consequence == o.rule.consequence; });
      const auto &got = find(grp.rules, o.rule.precondition);
      CHECK(got.related_count == o.related_count);
      CHECK(got.never_separated_count == o.never_separated_count);
      REQUIRE(got.scored() == o.eps_avg.has_value());
      if (!got.scored()) continue;
      CHECK(std::abs(got.scores->eps_avg - o.eps_avg->value()) <= 1e-12);
      CHECK(std::abs(got.scores->eps_min - o.eps_min->value()) <= 1e-12);
      CHECK(std::abs(got.scores->eps_frac - o.eps_frac->value()) <= 1e-12);
    }
  }
}

TEST_CASE("score invariants") {
  for (std::uint64_t seed = 3000; seed < 3100; ++seed) {
    const auto rc = testing::random_case(seed);
    const Thread &th = rc.corpus.thread;
    const auto rules = pf_rule_extract(th, rc.corpus.registry, rc.params).rules;

    for (std::size_t i = 0; i < rules.size(); ++i)
      for (std::size_t j = 0; j < rules.size(); ++j) {
        if (i == j) continue;
        const bool rel = related(th, rules[i].rule, rules[j].rule);
        CHECK(rel == related(th, rules[j].rule, rules[i].rule));
        if (!rel) continue;
        const PairProbs pp = pair_probs(th, rules[i].rule, rules[j].rule);
        const double delta = pp.p_both - pp.p_notfirst;
        CHECK((delta >= -1.0 && delta <= 1.0));
      }

    const auto groups = pf_rule_compare(th, rules, std::nullopt, 2);
    std::size_t total = 0;
    for (const auto &g : groups) {
      total += g.rules.size();
      for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const ScoredRule &s = g.rules[i];
        CHECK(s.rule.consequence == g.consequence);
        if (i > 0) CHECK_FALSE(ranks_before(s, g.rules[i - 1]));
        if (!s.scored()) continue;
        CHECK(s.scores->eps_min <= s.scores->eps_avg + 1e-15);
        if (s.scores->eps_frac == 1.0) CHECK(s.scores->eps_min >= 0.0);
        CHECK(s.never_separated_count <= s.related_count);
      }

      // Scores depend only on the rule's own group.
      std::vector<MinedRule> only;
      for (const auto &m : rules)
        if (m.rule.consequence == g.consequence) only.push_back(m);
      const auto isolated = pf_rule_compare(th, only, std::nullopt);
      REQUIRE(isolated.size() == 1);
      REQUIRE(isolated[0].rules.size() == g.rules.size());
      for (std::size_t i = 0; i < g.rules.size(); ++i) {
        CHECK(isolated[0].rules[i].rule == g.rules[i].rule);
        CHECK(isolated[0].rules[i].related_count == g.rules[i].related_count);
      }
    }
    CHECK(total == rules.size());

    const auto top2 = pf_rule_compare(th, rules, 2);
    for (const auto &g : top2) {
      CHECK(g.rules.size() <= 2);
      for (const auto &s : g.rules) CHECK(s.scored());
    }
  }
}
