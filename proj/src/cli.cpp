#include "aptmine/cli.hpp"

#include "aptmine/causality.hpp"
#include "aptmine/errors.hpp"
#include "aptmine/extraction.hpp"
#include "aptmine/ingestion.hpp"
#include "aptmine/oracle.hpp"
#include "aptmine/rule_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace aptmine {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class CliError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  return in;
}

void check_output_path(const std::string &path) {
  if (path.empty()) throw CliError("--out is required");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw CliError("output directory does not exist: " + parent.string());
}

// Renders the whole file in memory first, then writes it next to the target
// and renames it into place.
void write_file(const std::string &path, const std::function<void(std::ostream &)> &render) {
  std::ostringstream buffer;
  render(buffer);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError("cannot write " + tmp);
    out << buffer.str();
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw CliError("failed writing " + tmp);
    }
  }
  fs::rename(tmp, path);
}

struct MineOptions {
  std::string thread_path, out_path;
  ExtractParams params;
  unsigned threads = 1;
};

struct CompareOptions {
  std::string rules_path, thread_path, out_path;
  std::string k = "all";
  unsigned threads = 1;
};

struct IngestOptions {
  std::string events_path, out_path, locations_path, config_path, epoch, rejects_path, counts_path;
  std::optional<std::size_t> window;
  std::vector<double> thresholds;
  std::optional<int> period_days;
};

struct ReportOptions {
  std::string scored_path, out_path;
};

struct SynthOptions {
  std::string spec_path, out_path;
  std::optional<std::uint64_t> seed;
};

ThreadFile load_thread(const std::string &path) {
  auto in = open_input(path);
  return read_thread_file(in);
}

int do_ingest(const IngestOptions &o, std::ostream &out) {
  check_output_path(o.out_path);
  CorpusConfig cfg;
  if (!o.config_path.empty()) {
    auto in = open_input(o.config_path);
    cfg = read_corpus_config(in);
  }
  if (!o.locations_path.empty()) {
    auto in = open_input(o.locations_path);
    cfg.location_map = read_location_map(in);
  }
  if (!o.epoch.empty()) {
    const auto d = parse_date(o.epoch);
    if (!d) throw CliError("bad --epoch '" + o.epoch + "' (expected YYYY-MM-DD)");
    cfg.epoch = *d;
  }
  if (o.window) cfg.spike.window = *o.window;
  if (!o.thresholds.empty()) cfg.spike.thresholds = o.thresholds;
  if (o.period_days) cfg.period_days = *o.period_days;
  cfg.validate();

  auto in = open_input(o.events_path);
  ParsedEvents parsed = parse_events(in, cfg);
  if (parsed.events.empty()) throw CliError("no valid event rows in " + o.events_path);
  CorpusBuild build = build_corpus(parsed.events, cfg);

  std::vector<Reject> rejects = parsed.rejects;
  rejects.insert(rejects.end(), build.rejects.begin(), build.rejects.end());
  std::sort(rejects.begin(), rejects.end(), [](const auto &a, const auto &b) { return a.row < b.row; });

  const Date epoch = build.corpus.periods.front().start;
  ojson params;
  params["epoch"] = format_date(epoch);
  params["period_days"] = cfg.period_days;
  params["window"] = cfg.spike.window;
  params["thresholds"] = cfg.spike.thresholds;
  params["action_atoms"] = cfg.action_atoms == ActionAtoms::Spikes ? "spikes" : "spikes_and_events";
  params["locations"] = cfg.location_map.size();
  const std::string params_text = params.dump();

  write_file(o.out_path, [&](std::ostream &os) { write_thread_file(os, build.corpus, params_text); });
  const std::string rejects_path = o.rejects_path.empty() ? o.out_path + ".rejects" : o.rejects_path;
  write_file(rejects_path, [&](std::ostream &os) {
    os << "aptmine-rejects 1\n" << "params " << params_text << '\n';
    for (const auto &r : rejects) os << r.row << '\t' << r.reason << '\n';
  });
  if (!o.counts_path.empty())
    write_file(o.counts_path, [&](std::ostream &os) {
      os << "# aptmine-counts 1 " << params_text << '\n';
      write_count_series(os, build.counts);
    });

  out << "rows: " << parsed.rows << ", accepted: " << build.accepted << ", rejected: " << rejects.size() << '\n'
      << "periods: " << build.corpus.thread.t_max() << ", atoms: " << build.corpus.registry.size()
      << ", action atoms: " << build.corpus.registry.action_atoms().size() << '\n';
  return 0;
}

int do_mine(const MineOptions &o, std::ostream &out) {
  check_output_path(o.out_path);
  o.params.validate();
  const ThreadFile tf = load_thread(o.thread_path);
  const ExtractionReport report = pf_rule_extract(tf.corpus.thread, tf.corpus.registry, o.params, o.threads);
  write_file(o.out_path, [&](std::ostream &os) { write_rules_file(os, report, tf.corpus.registry, o.params); });
  out << "rules: " << report.rules.size() << '\n'
      << "combinations explored: " << report.combinations_explored << " (naive: " << report.naive_combinations
      << ")\n"
      << "max active atoms per period: " << report.max_active_atoms()
      << ", after support pruning: " << report.max_candidate_atoms() << '\n';
  return 0;
}

std::optional<std::size_t> parse_k(const std::string &k) {
  if (k == "all") return std::nullopt;
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(k, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos != k.size() || value == 0 || k.front() == '-') throw CliError("--k must be a positive integer or 'all'");
  return value;
}

int do_compare(const CompareOptions &o, std::ostream &out) {
  check_output_path(o.out_path);
  const auto k = parse_k(o.k);
  const ThreadFile tf = load_thread(o.thread_path);
  auto in = open_input(o.rules_path);
  const RulesFile rules = read_rules_file(in, tf.corpus.registry);
  const auto groups = pf_rule_compare(tf.corpus.thread, rules.rules, k, o.threads);
  write_file(o.out_path,
             [&](std::ostream &os) { write_scored_file(os, groups, tf.corpus.registry, rules.params, k); });
  std::size_t kept = 0;
  for (const auto &g : groups) kept += g.rules.size();
  out << "consequence groups: " << groups.size() << ", rules kept: " << kept << '\n';
  return 0;
}

int do_report(const ReportOptions &o, std::ostream &out) {
  auto in = open_input(o.scored_path);
  const auto entries = read_scored_file(in);
  if (o.out_path.empty()) {
    render_report(out, entries);
  } else {
    check_output_path(o.out_path);
    write_file(o.out_path, [&](std::ostream &os) { render_report(os, entries); });
  }
  return 0;
}

oracle::SynthSpec read_synth_spec(std::istream &in) {
  oracle::SynthSpec spec;
  try {
    const auto j = nlohmann::json::parse(in);
    spec.n_env = j.at("n_env").get<std::size_t>();
    spec.t_max = j.at("t_max").get<std::size_t>();
    spec.density = j.value("density", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.n_act = j.value("n_act", std::size_t{0});
    for (const auto &p : j.value("planted", nlohmann::json::array()))
      spec.planted.push_back({p.at("precondition").get<std::vector<AtomId>>(), p.at("consequence").get<AtomId>(),
                              p.value("firing_probability", 1.0), p.at("firings").get<std::size_t>()});
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("synthetic spec: ") + e.what());
  }
  return spec;
}

int do_synth(const SynthOptions &o, std::ostream &out) {
  check_output_path(o.out_path);
  auto in = open_input(o.spec_path);
  oracle::SynthSpec spec = read_synth_spec(in);
  if (o.seed) spec.seed = *o.seed;
  const BuiltCorpus corpus = oracle::generate_synthetic(spec);

  ojson params;
  params["n_env"] = spec.n_env;
  params["t_max"] = spec.t_max;
  params["density"] = spec.density;
  params["seed"] = spec.seed;
  params["n_act"] = spec.n_act;
  ojson planted = ojson::array();
  for (const auto &p : spec.planted) {
    ojson e;
    e["precondition"] = p.precondition;
    e["consequence"] = p.consequence;
    e["firing_probability"] = p.firing_probability;
    e["firings"] = p.firings;
    planted.push_back(std::move(e));
  }
  params["planted"] = std::move(planted);
  write_file(o.out_path, [&](std::ostream &os) { write_thread_file(os, corpus, params.dump()); });
  out << "periods: " << corpus.thread.t_max() << ", atoms: " << corpus.registry.size() << '\n';
  return 0;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Temporal causal rule mining over event threads", "aptmine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aptmine 1.0");

  IngestOptions ingest;
  auto *ingest_cmd = app.add_subcommand("ingest", "Build a thread file from an event CSV");
  ingest_cmd->add_option("events", ingest.events_path, "Event CSV (date,predicate,arg1,arg2,actor)")
      ->required()
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest.out_path, "Thread file to write")->required();
  ingest_cmd->add_option("--locations", ingest.locations_path, "Location map (city,theater)")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--config", ingest.config_path, "Corpus config (JSON)")->check(CLI::ExistingFile);
  ingest_cmd->add_option("--epoch", ingest.epoch, "Start of period 1 (YYYY-MM-DD)");
  ingest_cmd->add_option("--period-days", ingest.period_days, "Period length in days");
  ingest_cmd->add_option("--window", ingest.window, "Moving-average window in periods");
  ingest_cmd->add_option("--thresholds", ingest.thresholds, "Spike thresholds in standard deviations")
      ->delimiter(',');
  ingest_cmd->add_option("--rejects", ingest.rejects_path, "Rejects report (default <out>.rejects)");
  ingest_cmd->add_option("--emit-counts", ingest.counts_path, "Write per-period count series as CSV");

  MineOptions mine;
  auto *mine_cmd = app.add_subcommand("mine", "Extract prima facie rules from a thread file");
  mine_cmd->add_option("thread", mine.thread_path, "Thread file")->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("--out", mine.out_path, "Rules file to write")->required();
  mine_cmd->add_option("--max-dim", mine.params.max_dim, "Maximum precondition size")->capture_default_str();
  mine_cmd->add_option("--supp-lb", mine.params.supp_lb, "Minimum precondition support")->capture_default_str();
  mine_cmd->add_option("--min-prob", mine.params.min_prob, "Minimum rule probability")->capture_default_str();
  mine_cmd->add_option("--threads", mine.threads, "Worker threads (0 = all cores)")->capture_default_str();

  CompareOptions compare;
  auto *compare_cmd = app.add_subcommand("compare", "Score and rank rules by causality");
  compare_cmd->add_option("rules", compare.rules_path, "Rules file")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("thread", compare.thread_path, "Thread file")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare.out_path, "Scored-rules file to write")->required();
  compare_cmd->add_option("--k", compare.k, "Rules kept per consequence, or 'all'")->capture_default_str();
  compare_cmd->add_option("--threads", compare.threads, "Worker threads (0 = all cores)")->capture_default_str();

  ReportOptions report;
  auto *report_cmd = app.add_subcommand("report", "Render scored rules as a table");
  report_cmd->add_option("scored", report.scored_path, "Scored-rules file")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report.out_path, "Write the table here instead of stdout");

  SynthOptions synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate a synthetic thread file");
  synth_cmd->add_option("spec", synth.spec_path, "Synthetic corpus spec (JSON)")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out_path, "Thread file to write")->required();
  synth_cmd->add_option("--seed", synth.seed, "Override the spec's seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest_cmd) return do_ingest(ingest, out);
    if (*mine_cmd) return do_mine(mine, out);
    if (*compare_cmd) return do_compare(compare, out);
    if (*report_cmd) return do_report(report, out);
    if (*synth_cmd) return do_synth(synth, out);
  } catch (const std::exception &e) {
    err << "aptmine: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace aptmine
