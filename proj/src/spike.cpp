#include "aptmine/spike.hpp"

#include "aptmine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aptmine {

std::string to_string(Theater theater) {
  switch (theater) {
  case Theater::Iraq:
    return "Iraq";
  case Theater::Syria:
    return "Syria";
  case Theater::Total:
    return "Total";
  }
  return "?";
}

Theater parse_theater(const std::string &text) {
  if (text == "Iraq") return Theater::Iraq;
  if (text == "Syria") return Theater::Syria;
  if (text == "Total") return Theater::Total;
  throw std::invalid_argument("unknown theater '" + text + "' (expected Iraq, Syria or Total)");
}

void SpikeConfig::validate() const {
  if (window == 0) throw std::invalid_argument("spike window must be positive");
  if (thresholds.empty()) throw std::invalid_argument("at least one spike threshold is required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0)) throw std::invalid_argument("spike thresholds must be positive");
    if (i > 0 && !(thresholds[i - 1] < thresholds[i]))
      throw std::invalid_argument("spike thresholds must be sorted ascending and distinct");
  }
}

namespace {

struct WindowSums {
  long double sum = 0;
  long double sum_sq = 0;
};

WindowSums window_sums(const CountSeries &series, std::size_t window, TimeIndex t) {
  if (t <= window)
    throw InsufficientHistory("period " + std::to_string(t) + " needs " + std::to_string(window) +
                              " earlier periods");
  if (t > series.counts.size())
    throw TimeRangeError("period " + std::to_string(t) + " outside 1.." + std::to_string(series.counts.size()));
  WindowSums s;
  for (TimeIndex i = t - window; i < t; ++i) {
    const auto c = static_cast<long double>(series.counts[i - 1]);
    s.sum += c;
    s.sum_sq += c * c;
  }
  return s;
}

} // namespace

MovingStats moving_stats(const CountSeries &series, std::size_t window, TimeIndex t) {
  const WindowSums s = window_sums(series, window, t);
  const auto w = static_cast<long double>(window);
  const long double mean = s.sum / w;
  const long double var = std::max<long double>(0, (w * s.sum_sq - s.sum * s.sum) / (w * w));
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var))};
}

std::vector<SpikeEmission> spike_atoms(const CountSeries &series, const SpikeConfig &config) {
  config.validate();
  std::vector<SpikeEmission> out;
  const auto w = static_cast<long double>(config.window);
  for (TimeIndex t = config.window + 1; t <= series.counts.size(); ++t) {
    const WindowSums s = window_sums(series, config.window, t);
    // Counts are integers, so every term below is an exact integer in long double
    // for any realistic series.
    const long double excess = w * static_cast<long double>(series.counts[t - 1]) - s.sum;
    if (excess <= 0) continue;
    const long double spread = w * s.sum_sq - s.sum * s.sum;
    for (double k : config.thresholds) {
      const auto kk = static_cast<long double>(k);
      if (excess * excess >= kk * kk * spread) out.push_back({t, series.key, k});
    }
  }
  return out;
}

std::string threshold_label(double threshold) {
  std::ostringstream os;
  os << threshold << "sigma";
  return os.str();
}

std::string spike_predicate(const std::string &activity) { return activity + "Spike"; }

} // namespace aptmine
