#include "aptmine/errors.hpp"
#include "aptmine/spike.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace aptmine;

namespace {

CountSeries series(std::vector<std::uint64_t> counts) {
  return CountSeries{SeriesKey{"VBIED", Theater::Iraq}, std::move(counts)};
}

std::vector<std::pair<TimeIndex, double>> emitted(const std::vector<SpikeEmission> &es) {
  std::vector<std::pair<TimeIndex, double>> out;
  for (const auto &e : es) out.emplace_back(e.period, e.threshold);
  return out;
}

} // namespace

TEST_CASE("a two-sigma jump emits both thresholds") {
  const auto s = series({1, 3, 1, 3, 8});
  const MovingStats ms = moving_stats(s, 4, 5);
  CHECK(ms.mean == 2.0);
  CHECK(ms.sigma == 1.0);
  const auto es = spike_atoms(s, SpikeConfig{});
  REQUIRE(es.size() == 2);
  CHECK(es[0] == SpikeEmission{5, s.key, 1.0});
  CHECK(es[1] == SpikeEmission{5, s.key, 2.0});
}

TEST_CASE("boundary value equal to mean plus k sigma emits") {
  // mean 2, sigma 1: 3 hits the 1-sigma bound exactly, 4 the 2-sigma bound.
  CHECK(emitted(spike_atoms(series({1, 3, 1, 3, 3}), SpikeConfig{})) ==
        std::vector<std::pair<TimeIndex, double>>{{5, 1.0}});
  CHECK(emitted(spike_atoms(series({1, 3, 1, 3, 4}), SpikeConfig{})) ==
        std::vector<std::pair<TimeIndex, double>>{{5, 1.0}, {5, 2.0}});
}

TEST_CASE("flat history needs a strict rise") {
  CHECK(spike_atoms(series({5, 5, 5, 5, 5, 5, 5}), SpikeConfig{}).empty());
  CHECK(emitted(spike_atoms(series({5, 5, 5, 5, 6}), SpikeConfig{})) ==
        std::vector<std::pair<TimeIndex, double>>{{5, 1.0}, {5, 2.0}});
  CHECK(spike_atoms(series({0, 0, 0, 0, 0}), SpikeConfig{}).empty());
}

TEST_CASE("moving_stats guards its range") {
  const auto s = series({1, 2, 3});
  CHECK_THROWS_AS(moving_stats(s, 4, 3), InsufficientHistory);
  CHECK_THROWS_AS(moving_stats(s, 2, 2), InsufficientHistory);
  CHECK(moving_stats(s, 2, 3).mean == 1.5);
  CHECK_THROWS_AS(moving_stats(s, 2, 4), TimeRangeError);
  CHECK(spike_atoms(s, SpikeConfig{}).empty()); // shorter than the window
}

TEST_CASE("spike configuration is validated") {
  CHECK_THROWS_AS((SpikeConfig{0, {1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SpikeConfig{4, {}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SpikeConfig{4, {2.0, 1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SpikeConfig{4, {0.0}}.validate()), std::invalid_argument);
  CHECK_NOTHROW(SpikeConfig{}.validate());
}

TEST_CASE("labels and names") {
  CHECK(threshold_label(1.0) == "1sigma");
  CHECK(threshold_label(2.0) == "2sigma");
  CHECK(threshold_label(1.5) == "1.5sigma");
  CHECK(spike_predicate("VBIED") == "VBIEDSpike");
  CHECK(to_string(Theater::Syria) == "Syria");
  CHECK(parse_theater("Total") == Theater::Total);
  CHECK_THROWS_AS(parse_theater("iraq"), std::invalid_argument);
}

TEST_CASE("spike properties over random series") {
  std::mt19937_64 rng(7);
  const SpikeConfig cfg{4, {1.0, 1.5, 2.0}};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint64_t> counts(1 + rng() % 40);
    for (auto &c : counts) c = rng() % (1 + rng() % 30);
    const auto s = series(counts);
    const auto es = spike_atoms(s, cfg);

    for (const auto &e : es) {
      CHECK(e.period > cfg.window);
      // Nesting: emitting at k implies emitting at every smaller threshold.
      for (double k : cfg.thresholds)
        if (k < e.threshold)
          CHECK(std::find(es.begin(), es.end(), SpikeEmission{e.period, s.key, k}) != es.end());
      const MovingStats ms = moving_stats(s, cfg.window, e.period);
      CHECK(static_cast<double>(counts[e.period - 1]) > ms.mean);
    }

    // Scale invariance under positive integer factors.
    const std::uint64_t factor = 2 + rng() % 9;
    auto scaled = counts;
    for (auto &c : scaled) c *= factor;
    CHECK(emitted(spike_atoms(series(scaled), cfg)) == emitted(es));

    // Causal: emissions up to t depend only on the first t periods.
    const std::size_t cut = rng() % (counts.size() + 1);
    const auto prefix = spike_atoms(series({counts.begin(), counts.begin() + static_cast<long>(cut)}), cfg);
    std::vector<SpikeEmission> head;
    for (const auto &e : es)
      if (e.period <= cut) head.push_back(e);
    CHECK(prefix == head);
  }
}
