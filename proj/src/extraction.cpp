#include "aptmine/extraction.hpp"

#include "aptmine/errors.hpp"
#include "aptmine/parallel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace aptmine {

void ExtractParams::validate() const {
  if (max_dim < 1) throw std::invalid_argument("max_dim must be at least 1");
  if (supp_lb < 1) throw std::invalid_argument("supp_lb must be at least 1");
  if (!(min_prob >= 0.0 && min_prob <= 1.0)) throw std::invalid_argument("min_prob must lie in [0, 1]");
}

std::size_t ExtractionReport::max_active_atoms() const {
  return active_atom_counts.empty() ? 0 : *std::max_element(active_atom_counts.begin(), active_atom_counts.end());
}

std::size_t ExtractionReport::max_candidate_atoms() const {
  return candidate_atom_counts.empty() ? 0
                                       : *std::max_element(candidate_atom_counts.begin(), candidate_atom_counts.end());
}

std::uint64_t combinations_up_to(std::uint64_t n, std::uint64_t max_k) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  unsigned __int128 binom = 1;
  for (std::uint64_t k = 1; k <= max_k && k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    if (binom > kMax || total > kMax - static_cast<std::uint64_t>(binom)) return kMax;
    total += static_cast<std::uint64_t>(binom);
  }
  return total;
}

std::vector<AtomId> frequent_env_atoms(const Thread &thread, const AtomRegistry &registry, std::size_t supp_lb) {
  std::vector<AtomId> out;
  for (AtomId a : registry.environmental_atoms())
    if (thread.occurrences(a).count() >= supp_lb) out.push_back(a);
  return out;
}

namespace {

// Appends every subset of pool with 1..max_dim elements in lexicographic order.
void enumerate_subsets(const std::vector<AtomId> &pool, std::size_t max_dim, std::vector<Conjunction> &out) {
  std::vector<AtomId> current;
  auto recurse = [&](auto &self, std::size_t start) -> void {
    for (std::size_t i = start; i < pool.size(); ++i) {
      current.push_back(pool[i]);
      out.emplace_back(current);
      if (current.size() < max_dim) self(self, i + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
}

struct ConsequenceResult {
  std::vector<MinedRule> rules;
  std::uint64_t explored = 0;
  std::uint64_t enumerated = 0;
};

std::vector<Conjunction> candidates_for(const Thread &thread, AtomId g, const ExtractParams &params,
                                        const std::vector<AtomId> &frequent, std::uint64_t &enumerated) {
  const BitSet &head = thread.occurrences(g);
  if (!head.any()) throw EmptyConsequence("consequence atom " + std::to_string(g) + " never occurs");

  std::vector<Conjunction> out;
  std::vector<AtomId> pool;
  // Bit b marks g at time b+1, preceded by Θ[b].
  for (std::size_t bit : head.members()) {
    if (bit == 0) continue;
    const World &w = thread.world(bit);
    pool.clear();
    for (AtomId a : frequent)
      if (a != g && w.contains(a)) pool.push_back(a);
    const std::size_t before = out.size();
    enumerate_subsets(pool, params.max_dim, out);
    enumerated += out.size() - before;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConsequenceResult mine_consequence(const Thread &thread, AtomId g, const ExtractParams &params,
                                   const std::vector<AtomId> &frequent) {
  ConsequenceResult result;
  const std::vector<Conjunction> candidates = candidates_for(thread, g, params, frequent, result.enumerated);
  result.explored = candidates.size();

  const BitSet next = thread.occurrences(g).shifted_down(1);
  const std::size_t g_count = thread.occurrences(g).count();
  const std::size_t t_max = thread.t_max();

  for (const Conjunction &c : candidates) {
    const BitSet occ = thread.conjunction_occurrences(c);
    const std::size_t s = occ.count();
    if (s < params.supp_lb) continue;
    const std::size_t trials = and_count(occ, thread.with_successor());
    if (trials == 0) continue;
    const std::size_t hits = and_count(occ, next);
    // p > rho  <=>  hits / trials > g_count / t_max
    if (hits * t_max <= g_count * trials) continue;
    const Frequency p{hits, trials};
    if (p.value() < params.min_prob) continue;

    AptRule rule(c, g);
    RuleStats stats;
    stats.p = p.value();
    stats.p_star = negative_probability(thread, c, g);
    stats.rho = static_cast<double>(g_count) / static_cast<double>(t_max);
    stats.support = s;
    result.rules.push_back({std::move(rule), stats});
  }
  return result;
}

} // namespace

std::vector<Conjunction> candidate_preconditions(const Thread &thread, AtomId g, const ExtractParams &params,
                                                 const std::vector<AtomId> &frequent) {
  params.validate();
  std::uint64_t enumerated = 0;
  return candidates_for(thread, g, params, frequent, enumerated);
}

ExtractionReport pf_rule_extract(const Thread &thread, const AtomRegistry &registry, const ExtractParams &params,
                                 unsigned threads) {
  params.validate();
  ExtractionReport report;

  const std::vector<AtomId> env = registry.environmental_atoms();
  const std::vector<AtomId> frequent = frequent_env_atoms(thread, registry, params.supp_lb);
  for (TimeIndex t = 1; t <= thread.t_max(); ++t) {
    const World &w = thread.world(t);
    report.active_atom_counts.push_back(
        static_cast<std::size_t>(std::count_if(env.begin(), env.end(), [&](AtomId a) { return w.contains(a); })));
    report.candidate_atom_counts.push_back(static_cast<std::size_t>(
        std::count_if(frequent.begin(), frequent.end(), [&](AtomId a) { return w.contains(a); })));
  }

  std::vector<AtomId> consequences;
  for (AtomId g : registry.action_atoms())
    if (thread.occurrences(g).any()) consequences.push_back(g);

  std::vector<ConsequenceResult> per_g(consequences.size());
  parallel_for(consequences.size(), threads,
               [&](std::size_t i) { per_g[i] = mine_consequence(thread, consequences[i], params, frequent); });

  for (std::size_t i = 0; i < consequences.size(); ++i) {
    const AtomId g = consequences[i];
    const std::uint64_t pool = env.size() - (registry.is_environmental(g) ? 1 : 0);
    const std::uint64_t naive = combinations_up_to(pool, params.max_dim);
    report.naive_combinations =
        report.naive_combinations > std::numeric_limits<std::uint64_t>::max() - naive
            ? std::numeric_limits<std::uint64_t>::max()
            : report.naive_combinations + naive;
    report.combinations_explored += per_g[i].explored;
    report.combinations_enumerated += per_g[i].enumerated;
    for (auto &r : per_g[i].rules) report.rules.push_back(std::move(r));
  }
  return report;
}

} // namespace aptmine
