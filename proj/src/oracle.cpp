#include "aptmine/oracle.hpp"

#include "aptmine/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace aptmine::oracle {

// ---------------------------------------------------------------------------
// Rational

namespace {

Rational reduce(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    const __int128 r = a % b;
    a = b;
    b = r;
  }
  const __int128 g = a == 0 ? 1 : a;
  num /= g;
  den /= g;
  constexpr __int128 kLimit = std::numeric_limits<std::int64_t>::max();
  if (num > kLimit || -num > kLimit || den > kLimit) throw std::overflow_error("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational operator+(const Rational &a, const Rational &b) {
  return reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational &a, const Rational &b) { return a + Rational(-b.num_, b.den_); }

Rational operator/(const Rational &a, std::int64_t d) { return reduce(a.num_, static_cast<__int128>(a.den_) * d); }

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
  return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
}

// ---------------------------------------------------------------------------
// Fixture

BuiltCorpus t1() {
  AtomRegistry reg;
  const AtomId a = reg.intern("a", {});
  const AtomId b = reg.intern("b", {});
  const AtomId g = reg.intern("g", {});
  reg.set_action(g);
  reg.freeze();
  Thread thread(reg.size(), {{a, b}, {g}, {b}, {g, a}, {b}, {}});
  return BuiltCorpus{std::move(thread), std::move(reg), {}};
}

// ---------------------------------------------------------------------------
// Direct enumeration

namespace {

using Worlds = std::vector<std::set<AtomId>>; // index t-1

Worlds worlds_of(const Thread &thread) {
  Worlds w;
  for (TimeIndex t = 1; t <= thread.t_max(); ++t) {
    const auto m = thread.world(t).members();
    w.emplace_back(m.begin(), m.end());
  }
  return w;
}

bool holds(const Worlds &w, std::size_t t, const std::vector<AtomId> &atoms) {
  return std::all_of(atoms.begin(), atoms.end(), [&](AtomId a) { return w[t - 1].count(a) > 0; });
}

bool holds(const Worlds &w, std::size_t t, AtomId a) { return w[t - 1].count(a) > 0; }

ExactStats stats_of(const Worlds &w, const std::vector<AtomId> &c, AtomId g) {
  const std::size_t t_max = w.size();
  ExactStats s;
  std::int64_t g_count = 0, c_succ = 0, c_then_g = 0, g_unpreceded = 0;
  for (std::size_t t = 1; t <= t_max; ++t) {
    const bool c_now = holds(w, t, c);
    if (c_now) ++s.support;
    if (holds(w, t, g)) {
      ++g_count;
      if (t == 1 || !holds(w, t - 1, c)) ++g_unpreceded;
    }
    if (t < t_max && c_now) {
      ++c_succ;
      if (holds(w, t + 1, g)) ++c_then_g;
    }
  }
  s.rho = Rational(g_count, static_cast<std::int64_t>(t_max));
  if (c_succ > 0) s.p = Rational(c_then_g, c_succ);
  if (g_count > 0) s.p_star = Rational(g_unpreceded, g_count);
  return s;
}

bool prima_facie(const Worlds &w, const std::vector<AtomId> &c, AtomId g) {
  const std::size_t t_max = w.size();
  bool g_occurs = false, c_before_g = false;
  for (std::size_t t = 1; t <= t_max; ++t) {
    if (holds(w, t, g)) g_occurs = true;
    if (holds(w, t, c))
      for (std::size_t u = t + 1; u <= t_max; ++u)
        if (holds(w, u, g)) c_before_g = true;
  }
  const ExactStats s = stats_of(w, c, g);
  return g_occurs && c_before_g && s.p && *s.p > s.rho;
}

void all_subsets(const std::vector<AtomId> &pool, std::size_t max_dim, std::vector<std::vector<AtomId>> &out) {
  const std::size_t n = pool.size();
  // Iterative index odometer per size, independent of the engine's recursive enumeration.
  for (std::size_t k = 1; k <= max_dim && k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<AtomId> subset;
      for (std::size_t i : idx) subset.push_back(pool[i]);
      out.push_back(std::move(subset));
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

} // namespace

ExactStats exact_stats(const Thread &thread, const Conjunction &c, AtomId g) {
  return stats_of(worlds_of(thread), c.atoms(), g);
}

bool is_prima_facie(const Thread &thread, const Conjunction &c, AtomId g) {
  return prima_facie(worlds_of(thread), c.atoms(), g);
}

ExtractionReport brute_force_extract(const Thread &thread, const AtomRegistry &registry,
                                     const ExtractParams &params, std::uint64_t guard) {
  params.validate();
  const Worlds w = worlds_of(thread);
  const std::size_t t_max = w.size();

  std::vector<AtomId> consequences;
  for (AtomId g = 0; g < registry.size(); ++g) {
    if (!registry.is_action(g)) continue;
    for (std::size_t t = 1; t <= t_max; ++t)
      if (holds(w, t, g)) {
        consequences.push_back(g);
        break;
      }
  }

  std::uint64_t work = 0;
  for (AtomId g : consequences) {
    std::uint64_t n = 0;
    for (AtomId a = 0; a < registry.size(); ++a)
      if (registry.is_environmental(a) && a != g) ++n;
    // sum_{k<=max_dim} C(n, k)
    std::uint64_t binom = 1, total = 0;
    for (std::uint64_t k = 1; k <= params.max_dim && k <= n; ++k) {
      binom = binom * (n - k + 1) / k;
      total += binom;
    }
    work += total * t_max;
    if (work > guard)
      throw GuardExceeded("brute-force enumeration needs more than " + std::to_string(guard) + " evaluations");
  }

  ExtractionReport report;
  for (AtomId g : consequences) {
    std::vector<AtomId> pool;
    for (AtomId a = 0; a < registry.size(); ++a)
      if (registry.is_environmental(a) && a != g) pool.push_back(a);
    std::vector<std::vector<AtomId>> subsets;
    all_subsets(pool, params.max_dim, subsets);
    report.combinations_explored += subsets.size();
    report.naive_combinations += subsets.size();
    for (const auto &c : subsets) {
      const ExactStats s = stats_of(w, c, g);
      if (s.support < params.supp_lb || !s.p) continue;
      if (!(*s.p > s.rho) || s.p->value() < params.min_prob) continue;
      RuleStats rs;
      rs.p = s.p->value();
      rs.p_star = s.p_star ? std::optional<double>(s.p_star->value()) : std::nullopt;
      rs.rho = s.rho.value();
      rs.support = s.support;
      report.rules.push_back({AptRule(Conjunction(c), g), rs});
    }
  }
  std::sort(report.rules.begin(), report.rules.end(),
            [](const MinedRule &a, const MinedRule &b) { return a.rule < b.rule; });
  return report;
}

std::vector<OracleScore> brute_force_scores(const Thread &thread, const std::vector<MinedRule> &rules) {
  const Worlds w = worlds_of(thread);
  const std::size_t t_max = w.size();
  std::vector<OracleScore> out;

  for (const MinedRule &r : rules) {
    OracleScore score{r.rule, 0, 0, std::nullopt, std::nullopt, std::nullopt};
    const auto &c = r.rule.precondition.atoms();
    const AtomId g = r.rule.consequence;
    Rational sum;
    std::optional<Rational> min;
    std::int64_t nonnegative = 0;

    for (const MinedRule &other : rules) {
      if (other.rule == r.rule) continue;
      const auto &c2 = other.rule.precondition.atoms();
      std::int64_t both_n = 0, both_g = 0, sep_n = 0, sep_g = 0;
      for (std::size_t t = 1; t < t_max; ++t) {
        const bool first = holds(w, t, c), second = holds(w, t, c2), next = holds(w, t + 1, g);
        if (first && second) {
          ++both_n;
          if (next) ++both_g;
        }
        if (!first && second) {
          ++sep_n;
          if (next) ++sep_g;
        }
      }
      const bool is_related = other.rule.consequence == g && both_g > 0;
      if (!is_related) continue;
      const Rational p_both(both_g, both_n);
      const Rational p_not = sep_n > 0 ? Rational(sep_g, sep_n) : Rational(0);
      if (sep_n == 0) ++score.never_separated_count;
      const Rational delta = p_both - p_not;
      sum = sum + delta;
      if (!min || delta < *min) min = delta;
      if (delta >= Rational(0)) ++nonnegative;
      ++score.related_count;
    }
    if (score.related_count > 0) {
      const auto n = static_cast<std::int64_t>(score.related_count);
      score.eps_avg = sum / n;
      score.eps_min = min;
      score.eps_frac = Rational(nonnegative, n);
    }
    out.push_back(std::move(score));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpora

void SynthSpec::validate() const {
  if (n_env == 0) throw std::invalid_argument("synthetic corpus needs at least one atom");
  if (t_max == 0) throw std::invalid_argument("synthetic corpus needs at least one period");
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  if (n_act > n_env) throw std::invalid_argument("n_act exceeds n_env");
  for (const auto &p : planted) {
    if (p.precondition.empty()) throw std::invalid_argument("planted precondition is empty");
    if (p.precondition.size() > n_env) throw std::invalid_argument("planted precondition wider than n_env");
    for (AtomId a : p.precondition)
      if (a >= n_env) throw std::invalid_argument("planted precondition atom " + std::to_string(a) + " >= n_env");
    if (p.consequence >= n_env) throw std::invalid_argument("planted consequence >= n_env");
    if (std::find(p.precondition.begin(), p.precondition.end(), p.consequence) != p.precondition.end())
      throw std::invalid_argument("planted consequence appears in its precondition");
    if (!(p.firing_probability >= 0.0 && p.firing_probability <= 1.0))
      throw std::invalid_argument("firing probability must lie in [0, 1]");
    if (p.firings > t_max - 1) throw std::invalid_argument("more planted firings than periods with a successor");
  }
}

namespace {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so uniform draws are derived from raw output here.
class PortableRng {
public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform on [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace

BuiltCorpus generate_synthetic(const SynthSpec &spec) {
  spec.validate();
  PortableRng rng(spec.seed);

  AtomRegistry reg;
  for (std::size_t i = 0; i < spec.n_env; ++i) reg.intern("env", {std::to_string(i)});
  for (std::size_t i = 0; i < spec.n_act; ++i) reg.set_action(static_cast<AtomId>(i));
  for (const auto &p : spec.planted) reg.set_action(p.consequence);
  reg.freeze();

  std::vector<std::set<AtomId>> worlds(spec.t_max);
  for (std::size_t t = 0; t < spec.t_max; ++t)
    for (std::size_t a = 0; a < spec.n_env; ++a)
      if (rng.bernoulli(spec.density)) worlds[t].insert(static_cast<AtomId>(a));

  for (const auto &p : spec.planted) {
    // Partial Fisher-Yates over periods 1..t_max-1 (indices 0..t_max-2).
    std::vector<std::size_t> slots(spec.t_max - 1);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < p.firings; ++i) {
      const std::size_t j = i + rng.below(slots.size() - i);
      std::swap(slots[i], slots[j]);
    }
    std::sort(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(p.firings));
    for (std::size_t i = 0; i < p.firings; ++i) {
      const std::size_t t = slots[i];
      for (AtomId a : p.precondition) worlds[t].insert(a);
      if (rng.bernoulli(p.firing_probability)) worlds[t + 1].insert(p.consequence);
    }
  }

  std::vector<std::vector<AtomId>> members;
  for (const auto &w : worlds) members.emplace_back(w.begin(), w.end());
  return BuiltCorpus{Thread(reg.size(), std::move(members)), std::move(reg), {}};
}

} // namespace aptmine::oracle
