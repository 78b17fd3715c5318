#include "aptmine/causality.hpp"

#include "aptmine/parallel.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <stdexcept>

namespace aptmine {

namespace {

BitSet masked_occurrences(const Thread &thread, const Conjunction &c) {
  BitSet occ = thread.conjunction_occurrences(c);
  occ &= thread.with_successor();
  return occ;
}

double ratio(std::size_t hits, std::size_t trials) {
  return static_cast<double>(hits) / static_cast<double>(trials);
}

// Running totals of the deltas p_{r,r'} - p_{¬r,r'} for one rule.
struct DeltaAccumulator {
  double sum = 0.0;
  double min = 0.0;
  std::size_t nonnegative = 0;
  std::size_t count = 0;
  std::size_t never_separated = 0;

  void add(double delta, bool separated_never) {
    min = count == 0 ? delta : std::min(min, delta);
    sum += delta;
    if (delta >= 0.0) ++nonnegative;
    ++count;
    if (separated_never) ++never_separated;
  }

  void finish(ScoredRule &out) const {
    out.related_count = count;
    out.never_separated_count = never_separated;
    if (count == 0) {
      out.scores.reset();
      return;
    }
    out.scores = CausalScores{sum / static_cast<double>(count), min,
                              static_cast<double>(nonnegative) / static_cast<double>(count)};
  }
};

// p_{¬first, second}: over the times `second` holds and `first` does not.
std::pair<double, bool> notfirst_probability(const BitSet &first, const BitSet &second, const BitSet &next) {
  const std::size_t trials = andnot_count(first, second);
  if (trials == 0) return {0.0, true};
  return {ratio(andnot_count(first, second, next), trials), false};
}

std::vector<ScoredRule> score_group(const Thread &thread, AtomId g, const std::vector<const MinedRule *> &group) {
  const BitSet next = thread.occurrences(g).shifted_down(1);
  std::vector<BitSet> occ;
  occ.reserve(group.size());
  for (const MinedRule *r : group) occ.push_back(masked_occurrences(thread, r->rule.precondition));

  std::vector<DeltaAccumulator> acc(group.size());
  BitSet both;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      both = occ[i];
      both &= occ[j];
      const std::size_t hits = and_count(both, next);
      if (hits == 0) continue;
      const double p_both = ratio(hits, both.count());
      const auto [p_not_i, never_i] = notfirst_probability(occ[i], occ[j], next);
      const auto [p_not_j, never_j] = notfirst_probability(occ[j], occ[i], next);
      acc[i].add(p_both - p_not_i, never_i);
      acc[j].add(p_both - p_not_j, never_j);
    }
  }

  std::vector<ScoredRule> out;
  out.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    ScoredRule s{group[i]->rule, group[i]->stats, std::nullopt, 0, 0};
    acc[i].finish(s);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace

bool related(const Thread &thread, const AptRule &r, const AptRule &r2) {
  if (r == r2) throw std::invalid_argument("a rule is not compared with itself");
  if (r.consequence != r2.consequence) return false;
  BitSet both = masked_occurrences(thread, r.precondition);
  both &= masked_occurrences(thread, r2.precondition);
  return and_count(both, thread.occurrences(r.consequence).shifted_down(1)) > 0;
}

PairProbs pair_probs(const Thread &thread, const AptRule &r, const AptRule &r2) {
  if (!related(thread, r, r2)) throw std::invalid_argument("pair probabilities require related rules");
  const BitSet next = thread.occurrences(r.consequence).shifted_down(1);
  const BitSet first = masked_occurrences(thread, r.precondition);
  const BitSet second = masked_occurrences(thread, r2.precondition);
  const BitSet both = first & second;
  PairProbs out;
  out.p_both = ratio(and_count(both, next), both.count());
  std::tie(out.p_notfirst, out.never_separated) = notfirst_probability(first, second, next);
  return out;
}

ScoredRule causal_scores(const Thread &thread, const MinedRule &r, const std::vector<MinedRule> &pool) {
  DeltaAccumulator acc;
  for (const MinedRule &other : pool) {
    if (other.rule == r.rule || !related(thread, r.rule, other.rule)) continue;
    const PairProbs pp = pair_probs(thread, r.rule, other.rule);
    acc.add(pp.p_both - pp.p_notfirst, pp.never_separated);
  }
  ScoredRule out{r.rule, r.stats, std::nullopt, 0, 0};
  acc.finish(out);
  return out;
}

ScoredRule causal_scores(const Thread &thread, const AptRule &r, const std::vector<AptRule> &pool) {
  std::vector<MinedRule> mined;
  mined.reserve(pool.size());
  for (const AptRule &p : pool) mined.push_back({p, RuleStats{}});
  return causal_scores(thread, MinedRule{r, evaluate_rule(thread, r)}, mined);
}

bool ranks_before(const ScoredRule &a, const ScoredRule &b) {
  if (a.scored() != b.scored()) return a.scored();
  if (a.scored() && a.scores->eps_avg != b.scores->eps_avg) return a.scores->eps_avg > b.scores->eps_avg;
  const double pa = a.stats.p.value_or(-1.0);
  const double pb = b.stats.p.value_or(-1.0);
  if (pa != pb) return pa > pb;
  if (a.stats.support != b.stats.support) return a.stats.support > b.stats.support;
  return a.rule < b.rule;
}

std::vector<RankedGroup> pf_rule_compare(const Thread &thread, const std::vector<MinedRule> &rules,
                                         std::optional<std::size_t> k, unsigned threads) {
  std::map<AtomId, std::vector<const MinedRule *>> by_consequence;
  for (const MinedRule &r : rules) by_consequence[r.rule.consequence].push_back(&r);
  for (auto &[g, group] : by_consequence)
    std::sort(group.begin(), group.end(),
              [](const MinedRule *a, const MinedRule *b) { return a->rule.precondition < b->rule.precondition; });

  std::vector<RankedGroup> out;
  out.reserve(by_consequence.size());
  for (const auto &entry : by_consequence) out.push_back({entry.first, {}});

  std::vector<const std::vector<const MinedRule *> *> groups;
  for (const auto &entry : by_consequence) groups.push_back(&entry.second);

  parallel_for(out.size(), threads, [&](std::size_t i) {
    std::vector<ScoredRule> scored = score_group(thread, out[i].consequence, *groups[i]);
    std::sort(scored.begin(), scored.end(), ranks_before);
    if (k) {
      const auto keep = std::min<std::size_t>(
          *k, static_cast<std::size_t>(std::count_if(scored.begin(), scored.end(),
                                                     [](const ScoredRule &s) { return s.scored(); })));
      scored.erase(scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end());
    }
    out[i].rules = std::move(scored);
  });
  return out;
}

} // namespace aptmine
