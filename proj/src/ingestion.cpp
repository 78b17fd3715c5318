#include "aptmine/ingestion.hpp"

#include "aptmine/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace aptmine {

// ---------------------------------------------------------------------------
// Dates

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int value = 0;
    const char *first = text.data() + pos;
    const char *last = first + len;
    if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    std::from_chars(first, last, value);
    return value;
  };
  const auto y = number(0, 4), m = number(5, 2), d = number(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

void CorpusConfig::validate() const {
  if (period_days <= 0) throw std::invalid_argument("period length must be positive");
  spike.validate();
  for (const auto &[city, theater] : location_map)
    if (theater == Theater::Total) throw std::invalid_argument("location " + city + " must map to Iraq or Syria");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

// RFC 4180 fields of one physical line; quoted fields may contain commas and "".
std::optional<std::vector<std::string>> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

} // namespace

ParsedEvents parse_events(std::istream &in, const CorpusConfig &config) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("event file is empty; expected header date,predicate,arg1,arg2,actor");
  line = strip_cr(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_csv(line);
  const std::vector<std::string> expected{"date", "predicate", "arg1", "arg2", "actor"};
  if (!header || *header != expected)
    throw FormatError("malformed event header '" + line + "'; expected date,predicate,arg1,arg2,actor");

  ParsedEvents out;
  std::map<std::string, std::size_t> seen_arity;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (trim(line).empty()) continue;
    ++out.rows;
    auto reject = [&](std::string reason) { out.rejects.push_back({line_no, std::move(reason)}); };

    auto fields = split_csv(line);
    if (!fields) {
      reject("unterminated quoted field");
      continue;
    }
    if (fields->size() > 5) {
      reject("expected at most 5 fields, got " + std::to_string(fields->size()));
      continue;
    }
    fields->resize(5);
    const auto &[date_s, predicate, arg1, arg2, actor] =
        std::tie((*fields)[0], (*fields)[1], (*fields)[2], (*fields)[3], (*fields)[4]);

    const auto date = parse_date(date_s);
    if (!date) {
      reject("unparseable date '" + date_s + "' (expected YYYY-MM-DD)");
      continue;
    }
    if (predicate.empty()) {
      reject("empty predicate");
      continue;
    }
    if (arg1.empty() && !arg2.empty()) {
      reject("arg2 given without arg1");
      continue;
    }

    EventRecord rec;
    rec.date = *date;
    rec.predicate = predicate;
    rec.row = line_no;
    if (!actor.empty()) rec.actor = actor;
    if (!arg1.empty()) rec.location = arg1;

    bool actor_arg = false;
    std::optional<std::size_t> arity;
    if (!config.predicates.empty()) {
      const auto it = config.predicates.find(predicate);
      if (it == config.predicates.end()) {
        reject("unknown predicate '" + predicate + "'");
        continue;
      }
      actor_arg = it->second.actor_arg;
      arity = it->second.arity;
    }
    if (actor_arg) {
      if (actor.empty()) {
        reject("predicate '" + predicate + "' requires an actor");
        continue;
      }
      rec.args.push_back(actor);
    }
    if (!arg1.empty()) rec.args.push_back(arg1);
    if (!arg2.empty()) rec.args.push_back(arg2);

    if (!arity) {
      const auto [it, inserted] = seen_arity.emplace(predicate, rec.args.size());
      arity = it->second;
    }
    if (rec.args.size() != *arity) {
      reject("predicate '" + predicate + "' expects " + std::to_string(*arity) + " argument(s), got " +
             std::to_string(rec.args.size()));
      continue;
    }
    out.events.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus construction

CorpusBuild build_corpus(const std::vector<EventRecord> &events, const CorpusConfig &config) {
  config.validate();
  if (events.empty()) throw std::invalid_argument("cannot build a corpus from zero events");

  Date epoch = config.epoch.value_or(
      std::min_element(events.begin(), events.end(), [](const auto &a, const auto &b) { return a.date < b.date; })
          ->date);

  std::vector<SpikeSeriesSpec> series = config.spike_series;
  if (series.empty() && !config.location_map.empty()) {
    std::set<std::string> predicates;
    for (const auto &e : events) predicates.insert(e.predicate);
    for (const auto &p : predicates) series.push_back({p, {Theater::Iraq, Theater::Syria, Theater::Total}});
  }
  std::set<std::string> tracked;
  for (const auto &s : series) tracked.insert(s.activity);

  std::vector<Reject> rejects;
  using AtomKey = std::pair<std::string, std::vector<std::string>>;
  std::set<std::pair<std::size_t, AtomKey>> placements;
  std::set<AtomKey> atom_keys;
  std::map<std::pair<std::string, Theater>, std::map<std::size_t, std::uint64_t>> theater_counts;
  std::size_t t_max = 0;
  std::size_t accepted = 0;

  for (const auto &e : events) {
    if (e.date < epoch) {
      rejects.push_back({e.row, "date " + format_date(e.date) + " precedes epoch " + format_date(epoch)});
      continue;
    }
    std::optional<Theater> theater;
    if (tracked.count(e.predicate)) {
      const auto it = e.location ? config.location_map.find(*e.location) : config.location_map.end();
      if (it == config.location_map.end()) {
        rejects.push_back({e.row, "location '" + e.location.value_or("") + "' missing from location map"});
        continue;
      }
      theater = it->second;
    }
    const auto period = static_cast<std::size_t>((e.date - epoch).count() / config.period_days) + 1;
    t_max = std::max(t_max, period);
    AtomKey key{e.predicate, e.args};
    placements.emplace(period, key);
    atom_keys.insert(std::move(key));
    if (theater) ++theater_counts[{e.predicate, *theater}][period];
    ++accepted;
  }
  if (accepted == 0) throw std::invalid_argument("every event was rejected; nothing to build");

  AtomRegistry registry;
  for (const auto &[name, args] : atom_keys) registry.intern(name, args);
  std::vector<std::vector<AtomId>> worlds(t_max);
  for (const auto &[period, key] : placements) worlds[period - 1].push_back(*registry.find(key.first, key.second));
  if (config.action_atoms == ActionAtoms::SpikesAndEvents)
    for (AtomId id = 0; id < registry.size(); ++id) registry.set_action(id);

  std::vector<CountSeries> counts;
  for (const auto &spec : series) {
    for (Theater th : spec.theaters) {
      CountSeries cs{{spec.activity, th}, std::vector<std::uint64_t>(t_max, 0)};
      for (Theater part : {Theater::Iraq, Theater::Syria}) {
        if (th != Theater::Total && th != part) continue;
        if (auto it = theater_counts.find({spec.activity, part}); it != theater_counts.end())
          for (const auto &[period, n] : it->second) cs.counts[period - 1] += n;
      }
      counts.push_back(std::move(cs));
    }
  }
  std::sort(counts.begin(), counts.end(), [](const auto &a, const auto &b) { return a.key < b.key; });
  counts.erase(std::unique(counts.begin(), counts.end(), [](const auto &a, const auto &b) { return a.key == b.key; }),
               counts.end());

  for (const auto &cs : counts) {
    const auto emissions = spike_atoms(cs, config.spike);
    for (double k : config.spike.thresholds) {
      std::optional<AtomId> id;
      for (const auto &em : emissions) {
        if (em.threshold != k) continue;
        if (!id) {
          id = registry.intern(spike_predicate(cs.key.activity), {to_string(cs.key.theater), threshold_label(k)});
          registry.set_action(*id);
        }
        worlds[em.period - 1].push_back(*id);
      }
    }
  }
  for (auto &w : worlds) std::sort(w.begin(), w.end());

  std::vector<PeriodRange> periods;
  for (std::size_t t = 0; t < t_max; ++t) {
    const Date start = epoch + std::chrono::days{static_cast<long>(t) * config.period_days};
    periods.push_back({start, start + std::chrono::days{config.period_days - 1}});
  }
  registry.freeze();
  std::sort(rejects.begin(), rejects.end(), [](const auto &a, const auto &b) { return a.row < b.row; });

  const std::size_t n_atoms = registry.size();
  return CorpusBuild{BuiltCorpus{Thread(n_atoms, std::move(worlds)), std::move(registry), std::move(periods)},
                     std::move(rejects), std::move(counts), accepted};
}

// ---------------------------------------------------------------------------
// Auxiliary inputs

std::map<std::string, Theater> read_location_map(std::istream &in) {
  std::map<std::string, Theater> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_csv(line);
    if (!fields || fields->size() != 2)
      throw FormatError("location map line " + std::to_string(line_no) + ": expected city,theater");
    if (line_no == 1 && (*fields)[0] == "city" && (*fields)[1] == "theater") continue;
    Theater theater;
    try {
      theater = parse_theater((*fields)[1]);
    } catch (const std::invalid_argument &e) {
      throw FormatError("location map line " + std::to_string(line_no) + ": " + e.what());
    }
    if (theater == Theater::Total)
      throw FormatError("location map line " + std::to_string(line_no) + ": theater must be Iraq or Syria");
    out[(*fields)[0]] = theater;
  }
  return out;
}

CorpusConfig read_corpus_config(std::istream &in) {
  using nlohmann::json;
  CorpusConfig cfg;
  json j;
  try {
    j = json::parse(in);
    if (!j.is_object()) throw FormatError("corpus config must be a JSON object");
    for (const auto &[key, value] : j.items()) {
      if (key == "epoch") {
        auto d = parse_date(value.get<std::string>());
        if (!d) throw FormatError("corpus config: bad epoch '" + value.get<std::string>() + "'");
        cfg.epoch = *d;
      } else if (key == "period_days") {
        cfg.period_days = value.get<int>();
      } else if (key == "window") {
        cfg.spike.window = value.get<std::size_t>();
      } else if (key == "thresholds") {
        cfg.spike.thresholds = value.get<std::vector<double>>();
      } else if (key == "spike_series") {
        for (const auto &s : value) {
          SpikeSeriesSpec spec{s.at("activity").get<std::string>(), {}};
          const auto theaters = s.value("theaters", std::vector<std::string>{"Iraq", "Syria", "Total"});
          for (const auto &t : theaters) spec.theaters.push_back(parse_theater(t));
          cfg.spike_series.push_back(std::move(spec));
        }
      } else if (key == "predicates") {
        for (const auto &[name, p] : value.items())
          cfg.predicates[name] = PredicateSchema{p.at("arity").get<std::size_t>(), p.value("actor_arg", false)};
      } else if (key == "action_atoms") {
        const auto mode = value.get<std::string>();
        if (mode == "spikes")
          cfg.action_atoms = ActionAtoms::Spikes;
        else if (mode == "spikes_and_events")
          cfg.action_atoms = ActionAtoms::SpikesAndEvents;
        else
          throw FormatError("corpus config: action_atoms must be spikes or spikes_and_events");
      } else {
        throw FormatError("corpus config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw FormatError(std::string("corpus config: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw FormatError(std::string("corpus config: ") + e.what());
  }
  return cfg;
}

void write_count_series(std::ostream &out, const std::vector<CountSeries> &counts) {
  out << "activity,theater,period,count\n";
  for (const auto &cs : counts)
    for (std::size_t t = 0; t < cs.counts.size(); ++t)
      out << cs.key.activity << ',' << to_string(cs.key.theater) << ',' << (t + 1) << ',' << cs.counts[t] << '\n';
}

// ---------------------------------------------------------------------------
// Thread file

namespace {

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '\\':
      out += "\\\\";
      break;
    case '\t':
      out += "\\t";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\r':
      out += "\\r";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::optional<std::string> unescape(const std::string &s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) return std::nullopt;
    switch (s[i]) {
    case '\\':
      out += '\\';
      break;
    case 't':
      out += '\t';
      break;
    case 'n':
      out += '\n';
      break;
    case 'r':
      out += '\r';
      break;
    default:
      return std::nullopt;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Int> std::optional<Int> parse_uint(const std::string &s) {
  Int value{};
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

class LineReader {
public:
  explicit LineReader(std::istream &in) : in_(in) {}

  std::string next(const char *what) {
    std::string line;
    if (!std::getline(in_, line)) fail(std::string("unexpected end of file, expected ") + what);
    ++line_no_;
    return line;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw FormatError("thread file line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t count_line(const std::string &keyword) {
    const std::string line = next(keyword.c_str());
    const std::string prefix = keyword + " ";
    if (line.rfind(prefix, 0) != 0) fail("expected '" + prefix + "<count>'");
    const auto n = parse_uint<std::size_t>(line.substr(prefix.size()));
    if (!n) fail("bad count '" + line.substr(prefix.size()) + "'");
    return *n;
  }

private:
  std::istream &in_;
  std::size_t line_no_ = 0;
};

} // namespace

void write_thread_file(std::ostream &out, const BuiltCorpus &corpus, const std::string &params) {
  const AtomRegistry &reg = corpus.registry;
  const Thread &thread = corpus.thread;
  out << kThreadFileMagic << '\n';
  out << "params " << escape(params) << '\n';
  out << "atoms " << reg.size() << '\n';
  for (AtomId id = 0; id < reg.size(); ++id) {
    const GroundAtom &a = reg.atom(id);
    out << id << '\t' << escape(a.predicate.name) << '\t' << (reg.is_action(id) ? 1 : 0) << '\t'
        << (reg.is_environmental(id) ? 1 : 0);
    for (const auto &arg : a.args) out << '\t' << escape(arg);
    out << '\n';
  }
  out << "periods " << thread.t_max() << '\n';
  for (TimeIndex t = 1; t <= thread.t_max(); ++t) {
    out << t << '\t';
    if (corpus.periods.empty())
      out << "-\t-";
    else
      out << format_date(corpus.periods[t - 1].start) << '\t' << format_date(corpus.periods[t - 1].end);
    out << '\t';
    const auto members = thread.world(t).members();
    for (std::size_t i = 0; i < members.size(); ++i) out << (i ? " " : "") << members[i];
    out << '\n';
  }
  out << "end\n";
}

ThreadFile read_thread_file(std::istream &in) {
  LineReader reader(in);
  if (reader.next("version line") != kThreadFileMagic)
    reader.fail("not a thread file (expected '" + std::string(kThreadFileMagic) + "')");

  const std::string params_line = reader.next("params line");
  if (params_line.rfind("params ", 0) != 0) reader.fail("expected 'params <text>'");
  const auto params = unescape(params_line.substr(7));
  if (!params) reader.fail("bad escape in params");

  AtomRegistry registry;
  const std::size_t n_atoms = reader.count_line("atoms");
  for (std::size_t i = 0; i < n_atoms; ++i) {
    const auto cols = split(reader.next("atom record"), '\t');
    if (cols.size() < 4) reader.fail("atom record needs id, predicate, action flag, environmental flag");
    if (parse_uint<std::size_t>(cols[0]) != i) reader.fail("atom ids must be consecutive from 0");
    const auto name = unescape(cols[1]);
    if (!name || name->empty()) reader.fail("bad predicate name");
    if ((cols[2] != "0" && cols[2] != "1") || (cols[3] != "0" && cols[3] != "1")) reader.fail("flags must be 0 or 1");
    std::vector<std::string> args;
    for (std::size_t c = 4; c < cols.size(); ++c) {
      auto arg = unescape(cols[c]);
      if (!arg) reader.fail("bad escape in argument");
      args.push_back(std::move(*arg));
    }
    AtomId id;
    try {
      id = registry.intern(*name, args);
    } catch (const std::exception &e) {
      reader.fail(e.what());
    }
    if (id != i) reader.fail("duplicate atom");
    registry.set_action(id, cols[2] == "1");
    registry.set_environmental(id, cols[3] == "1");
  }

  const std::size_t t_max = reader.count_line("periods");
  if (t_max == 0) reader.fail("a thread needs at least one period");
  std::vector<std::vector<AtomId>> worlds(t_max);
  std::vector<PeriodRange> periods;
  bool dated = false;
  for (std::size_t t = 1; t <= t_max; ++t) {
    const auto cols = split(reader.next("period record"), '\t');
    if (cols.size() != 4) reader.fail("period record needs index, start, end, members");
    if (parse_uint<std::size_t>(cols[0]) != t) reader.fail("period indices must run 1..t_max");
    const bool has_dates = cols[1] != "-";
    if (t == 1) dated = has_dates;
    if (has_dates != dated) reader.fail("either every period or none carries dates");
    if (dated) {
      const auto start = parse_date(cols[1]), end = parse_date(cols[2]);
      if (!start || !end) reader.fail("bad period dates");
      periods.push_back({*start, *end});
    } else if (cols[2] != "-") {
      reader.fail("bad period dates");
    }
    if (!cols[3].empty()) {
      for (const auto &tok : split(cols[3], ' ')) {
        const auto id = parse_uint<AtomId>(tok);
        if (!id || *id >= n_atoms) reader.fail("bad atom id '" + tok + "'");
        if (!worlds[t - 1].empty() && worlds[t - 1].back() >= *id) reader.fail("period members must be sorted");
        worlds[t - 1].push_back(*id);
      }
    }
  }
  if (reader.next("end marker") != "end") reader.fail("expected 'end'");
  registry.freeze();
  return ThreadFile{BuiltCorpus{Thread(n_atoms, std::move(worlds)), std::move(registry), std::move(periods)}, *params};
}

} // namespace aptmine
