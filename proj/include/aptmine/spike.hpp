#pragma once

#include "aptmine/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aptmine {

enum class Theater { Iraq, Syria, Total };

std::string to_string(Theater theater);
/// Accepts "Iraq", "Syria", "Total" (case-sensitive). Throws std::invalid_argument.
Theater parse_theater(const std::string &text);

struct SeriesKey {
  std::string activity;
  Theater theater = Theater::Total;

  friend auto operator<=>(const SeriesKey &, const SeriesKey &) = default;
};

/// Incident counts for one (activity, theater), index 0 holding period 1.
struct CountSeries {
  SeriesKey key;
  std::vector<std::uint64_t> counts;
};

struct SpikeConfig {
  std::size_t window = 4;
  std::vector<double> thresholds{1.0, 2.0};

  /// Throws std::invalid_argument: window 0, empty/non-positive/unsorted/duplicate thresholds.
  void validate() const;
};

struct SpikeEmission {
  TimeIndex period = 0;
  SeriesKey key;
  double threshold = 0.0;

  friend bool operator==(const SpikeEmission &, const SpikeEmission &) = default;
};

struct MovingStats {
  double mean = 0.0;
  double sigma = 0.0; ///< population standard deviation
};

/// Mean and population standard deviation of the `window` periods strictly
/// before t. Throws InsufficientHistory when t <= window, TimeRangeError when
/// t is past the end of the series.
MovingStats moving_stats(const CountSeries &series, std::size_t window, TimeIndex t);

/// Emits (t, key, k) for every t > window and threshold k where
/// count[t] >= mean + k*sigma and count[t] > mean. Thresholds are checked
/// independently, so a 2-sigma period also emits the 1-sigma atom. Ordered by
/// period, then threshold.
///
/// The comparison is evaluated exactly on integers:
///   w*c - S > 0  and  (w*c - S)^2 >= k^2 * (w*Q - S^2)
/// with S, Q the window sum and sum of squares.
std::vector<SpikeEmission> spike_atoms(const CountSeries &series, const SpikeConfig &config);

/// "1sigma", "2sigma", "1.5sigma".
std::string threshold_label(double threshold);

/// Predicate name of the spike atom for an activity, e.g. "VBIEDSpike".
std::string spike_predicate(const std::string &activity);

} // namespace aptmine
