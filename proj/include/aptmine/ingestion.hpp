#pragma once

#include "aptmine/core.hpp"
#include "aptmine/spike.hpp"

#include <chrono>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aptmine {

using Date = std::chrono::sys_days;

/// Strict YYYY-MM-DD; std::nullopt for anything else, including impossible dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

struct PredicateSchema {
  std::size_t arity = 1;
  /// Prepend the row's actor as the first argument, e.g. airOp(Coalition, Mosul).
  bool actor_arg = false;
};

struct SpikeSeriesSpec {
  std::string activity;
  std::vector<Theater> theaters;
};

enum class ActionAtoms { Spikes, SpikesAndEvents };

struct CorpusConfig {
  /// Start of period 1; defaults to the earliest event date.
  std::optional<Date> epoch;
  int period_days = 7;
  std::map<std::string, Theater> location_map;
  SpikeConfig spike;
  /// Empty: one series per event predicate over Iraq, Syria and Total, but only
  /// when a location map is present.
  std::vector<SpikeSeriesSpec> spike_series;
  /// Empty: any predicate is accepted and its arguments are the non-empty
  /// arg1/arg2 columns.
  std::map<std::string, PredicateSchema> predicates;
  ActionAtoms action_atoms = ActionAtoms::Spikes;

  void validate() const;
};

struct EventRecord {
  Date date;
  std::string predicate;
  std::vector<std::string> args;
  std::optional<std::string> actor;
  std::optional<std::string> location;
  /// Line number in the source file.
  std::size_t row = 0;
};

struct Reject {
  std::size_t row = 0;
  std::string reason;

  friend bool operator==(const Reject &, const Reject &) = default;
};

struct ParsedEvents {
  std::vector<EventRecord> events;
  std::vector<Reject> rejects;
  std::size_t rows = 0;
};

/// Reads the event CSV (header `date,predicate,arg1,arg2,actor`). A bad header
/// throws FormatError; bad rows land in `rejects`.
ParsedEvents parse_events(std::istream &in, const CorpusConfig &config);

struct PeriodRange {
  Date start;
  Date end; ///< inclusive

  friend bool operator==(const PeriodRange &, const PeriodRange &) = default;
};

struct BuiltCorpus {
  Thread thread;
  AtomRegistry registry;
  /// One entry per time point, or empty for corpora without calendar dates.
  std::vector<PeriodRange> periods;
};

struct CorpusBuild {
  BuiltCorpus corpus;
  std::vector<Reject> rejects;
  std::vector<CountSeries> counts;
  std::size_t accepted = 0;
};

/// Buckets events into periods, counts each configured (activity, theater)
/// series, adds spike atoms, and freezes the registry. Atom ids are assigned
/// in sorted (predicate, args) order so the result does not depend on row
/// order; spike atoms follow the event atoms. Throws std::invalid_argument
/// when no event is accepted.
CorpusBuild build_corpus(const std::vector<EventRecord> &events, const CorpusConfig &config);

/// Lines `city,theater`, theater Iraq or Syria. Blank lines and lines starting
/// with '#' are skipped, as is an optional `city,theater` header.
std::map<std::string, Theater> read_location_map(std::istream &in);

/// JSON object with optional keys epoch, period_days, window, thresholds,
/// spike_series, predicates, action_atoms.
CorpusConfig read_corpus_config(std::istream &in);

/// `activity,theater,period,count` rows.
void write_count_series(std::ostream &out, const std::vector<CountSeries> &counts);

inline constexpr std::string_view kThreadFileMagic = "aptmine-thread 1";

/// Versioned line format: magic, `params <text>`, the registry (one atom per
/// line: id, predicate, action flag, environmental flag, args), then one line
/// per period with its dates and sorted member ids, then `end`.
void write_thread_file(std::ostream &out, const BuiltCorpus &corpus, const std::string &params);

struct ThreadFile {
  BuiltCorpus corpus;
  std::string params;
};

/// Inverse of write_thread_file; throws FormatError naming the line.
ThreadFile read_thread_file(std::istream &in);

} // namespace aptmine
