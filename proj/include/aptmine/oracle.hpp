#pragma once

// Reference implementations used to check the engine. Everything here works
// from the worlds of a thread by plain enumeration with exact rational
// arithmetic and shares no code with statistics, extraction or causality.

#include "aptmine/causality.hpp"
#include "aptmine/extraction.hpp"
#include "aptmine/ingestion.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace aptmine::oracle {

/// Normalized fraction with positive denominator.
class Rational {
public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator-(const Rational &a, const Rational &b);
  friend Rational operator/(const Rational &a, std::int64_t d);
  friend bool operator==(const Rational &, const Rational &) = default;
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
  std::int64_t num_;
  std::int64_t den_;
};

/// The fixture thread: t_max = 6, atoms a, b, g (ids 0, 1, 2), g the only
/// action atom, all three environmental.
///   Θ[1]={a,b} Θ[2]={g} Θ[3]={b} Θ[4]={g,a} Θ[5]={b} Θ[6]={}
BuiltCorpus t1();
inline constexpr AtomId kT1A = 0;
inline constexpr AtomId kT1B = 1;
inline constexpr AtomId kT1G = 2;

struct ExactStats {
  std::optional<Rational> p;
  std::optional<Rational> p_star;
  Rational rho;
  std::size_t support = 0;
};

/// Direct transcription of prior, rule probability, negative probability and
/// support by walking the worlds.
ExactStats exact_stats(const Thread &thread, const Conjunction &c, AtomId g);

/// Direct check of the three prima facie clauses for c ~> g.
bool is_prima_facie(const Thread &thread, const Conjunction &c, AtomId g);

inline constexpr std::uint64_t kDefaultGuard = 1'000'000;

/// Evaluates every subset of A_env \ {g} with 1..max_dim atoms against every
/// occurring action atom g, applying the same acceptance filter as the
/// engine. `guard` caps the work, counted as (precondition, consequence,
/// time point) evaluations; exceeding it throws GuardExceeded.
ExtractionReport brute_force_extract(const Thread &thread, const AtomRegistry &registry,
                                     const ExtractParams &params, std::uint64_t guard = kDefaultGuard);

struct OracleScore {
  AptRule rule;
  std::size_t related_count = 0;
  std::size_t never_separated_count = 0;
  /// Empty when related_count == 0.
  std::optional<Rational> eps_avg, eps_min, eps_frac;
};

/// All-pairs comparison over the whole rule set, filtering by relatedness
/// afterwards. Output order matches input order.
std::vector<OracleScore> brute_force_scores(const Thread &thread, const std::vector<MinedRule> &rules);

struct PlantedRule {
  std::vector<AtomId> precondition;
  AtomId consequence = 0;
  double firing_probability = 1.0;
  std::size_t firings = 0;
};

struct SynthSpec {
  std::size_t n_env = 0;
  std::size_t t_max = 0;
  std::vector<PlantedRule> planted;
  double density = 0.0;
  std::uint64_t seed = 0;
  /// Atoms 0..n_act-1 are action atoms in addition to every planted consequence.
  std::size_t n_act = 0;

  void validate() const;
};

/// Atoms env(0)..env(n_env-1), all environmental. Each atom holds in each
/// period independently with probability `density`; then for every planted
/// rule `firings` distinct periods in 1..t_max-1 are drawn, the precondition
/// atoms are set there and the consequence is set in the next period with
/// probability firing_probability. Deterministic for a fixed seed on every
/// platform.
BuiltCorpus generate_synthetic(const SynthSpec &spec);

} // namespace aptmine::oracle
