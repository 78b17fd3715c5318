#include "aptmine/rule_io.hpp"

#include "aptmine/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

namespace aptmine {

using ojson = nlohmann::ordered_json;

namespace {

ojson params_json(const ExtractParams &params) {
  ojson p;
  p["max_dim"] = params.max_dim;
  p["supp_lb"] = params.supp_lb;
  p["min_prob"] = params.min_prob;
  return p;
}

ExtractParams params_from(const ojson &j) {
  ExtractParams p;
  p.max_dim = j.at("max_dim").get<std::size_t>();
  p.supp_lb = j.at("supp_lb").get<std::size_t>();
  p.min_prob = j.at("min_prob").get<double>();
  return p;
}

ojson optional_number(const std::optional<double> &v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> optional_from(const ojson &j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

void rule_fields(ojson &rec, const AptRule &rule, const RuleStats &stats, const AtomRegistry &registry) {
  rec["consequence"] = rule.consequence;
  rec["consequence_atom"] = registry.name(rule.consequence);
  rec["precondition"] = rule.precondition.atoms();
  ojson names = ojson::array();
  for (AtomId a : rule.precondition.atoms()) names.push_back(registry.name(a));
  rec["precondition_atoms"] = std::move(names);
  rec["p"] = optional_number(stats.p);
  rec["p_star"] = optional_number(stats.p_star);
  rec["rho"] = stats.rho;
  rec["support"] = stats.support;
}

RuleStats stats_from(const ojson &rec) {
  RuleStats s;
  s.p = optional_from(rec.at("p"));
  s.p_star = optional_from(rec.at("p_star"));
  s.rho = rec.at("rho").get<double>();
  s.support = rec.at("support").get<std::size_t>();
  return s;
}

// Reads the header line and returns it, checking format name and version.
ojson read_header(std::istream &in, std::string_view format) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string(format) + " file is empty");
  ojson header;
  try {
    header = ojson::parse(line);
  } catch (const ojson::exception &e) {
    throw FormatError(std::string(format) + " header: " + e.what());
  }
  if (!header.is_object() || header.value("format", "") != format)
    throw FormatError("not a " + std::string(format) + " file");
  if (header.value("version", 0) != kRuleFileVersion)
    throw FormatError(std::string(format) + " version " + header.value("version", ojson()).dump() +
                      " is not supported");
  return header;
}

template <typename Fn> void for_each_record(std::istream &in, std::string_view format, Fn &&fn) {
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      fn(ojson::parse(line));
    } catch (const ojson::exception &e) {
      throw FormatError(std::string(format) + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument &e) {
      throw FormatError(std::string(format) + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

} // namespace

void write_rules_file(std::ostream &out, const ExtractionReport &report, const AtomRegistry &registry,
                      const ExtractParams &params) {
  ojson header;
  header["format"] = kRulesFormat;
  header["version"] = kRuleFileVersion;
  header["params"] = params_json(params);
  ojson summary;
  summary["rules"] = report.rules.size();
  summary["combinations_explored"] = report.combinations_explored;
  summary["combinations_enumerated"] = report.combinations_enumerated;
  summary["naive_combinations"] = report.naive_combinations;
  summary["max_active_atoms"] = report.max_active_atoms();
  summary["max_candidate_atoms"] = report.max_candidate_atoms();
  header["summary"] = std::move(summary);
  out << header.dump() << '\n';
  for (const MinedRule &r : report.rules) {
    ojson rec;
    rule_fields(rec, r.rule, r.stats, registry);
    out << rec.dump() << '\n';
  }
}

RulesFile read_rules_file(std::istream &in, const AtomRegistry &registry) {
  const ojson header = read_header(in, kRulesFormat);
  RulesFile file;
  try {
    file.params = params_from(header.at("params"));
  } catch (const ojson::exception &e) {
    throw FormatError(std::string("rules header: ") + e.what());
  }
  for_each_record(in, kRulesFormat, [&](const ojson &rec) {
    const auto g = rec.at("consequence").get<AtomId>();
    const auto pre = rec.at("precondition").get<std::vector<AtomId>>();
    const auto names = rec.at("precondition_atoms").get<std::vector<std::string>>();
    if (g >= registry.size() || registry.name(g) != rec.at("consequence_atom").get<std::string>())
      throw std::invalid_argument("consequence does not match the thread's registry");
    if (!registry.is_action(g)) throw std::invalid_argument("consequence is not an action atom");
    if (pre.size() != names.size()) throw std::invalid_argument("precondition ids and names differ in length");
    for (std::size_t i = 0; i < pre.size(); ++i)
      if (pre[i] >= registry.size() || registry.name(pre[i]) != names[i])
        throw std::invalid_argument("precondition does not match the thread's registry");
    file.rules.push_back({AptRule(Conjunction(pre), g), stats_from(rec)});
  });
  return file;
}

void write_scored_file(std::ostream &out, const std::vector<RankedGroup> &groups, const AtomRegistry &registry,
                       const ExtractParams &params, std::optional<std::size_t> k) {
  ojson header;
  header["format"] = kScoredFormat;
  header["version"] = kRuleFileVersion;
  ojson p = params_json(params);
  p["k"] = k ? ojson(*k) : ojson("all");
  header["params"] = std::move(p);
  out << header.dump() << '\n';
  for (const RankedGroup &group : groups) {
    std::size_t rank = 0;
    for (const ScoredRule &s : group.rules) {
      ojson rec;
      rec["rank"] = ++rank;
      rule_fields(rec, s.rule, s.stats, registry);
      rec["scored"] = s.scored();
      rec["eps_avg"] = s.scored() ? ojson(s.scores->eps_avg) : ojson(nullptr);
      rec["eps_min"] = s.scored() ? ojson(s.scores->eps_min) : ojson(nullptr);
      rec["eps_frac"] = s.scored() ? ojson(s.scores->eps_frac) : ojson(nullptr);
      rec["related_count"] = s.related_count;
      rec["never_separated"] = s.never_separated_count;
      out << rec.dump() << '\n';
    }
  }
}

std::vector<ScoredEntry> read_scored_file(std::istream &in) {
  read_header(in, kScoredFormat);
  std::vector<ScoredEntry> out;
  for_each_record(in, kScoredFormat, [&](const ojson &rec) {
    const auto g = rec.at("consequence").get<AtomId>();
    AptRule rule(Conjunction(rec.at("precondition").get<std::vector<AtomId>>()), g);
    ScoredRule s{std::move(rule), stats_from(rec), std::nullopt, rec.at("related_count").get<std::size_t>(),
                 rec.at("never_separated").get<std::size_t>()};
    if (rec.at("scored").get<bool>())
      s.scores = CausalScores{rec.at("eps_avg").get<double>(), rec.at("eps_min").get<double>(),
                              rec.at("eps_frac").get<double>()};
    out.push_back({rec.at("rank").get<std::size_t>(), std::move(s), rec.at("consequence_atom").get<std::string>(),
                   rec.at("precondition_atoms").get<std::vector<std::string>>()});
  });
  return out;
}

namespace {

std::string fixed(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

} // namespace

void render_report(std::ostream &out, const std::vector<ScoredEntry> &entries) {
  using Row = std::vector<std::string>;
  const Row header{"No.", "Precondition", "eps_avg", "p", "p*", "rho", "s", "eps_min", "eps_frac", "related"};

  std::vector<std::pair<std::string, Row>> rows; // (consequence, cells)
  std::size_t number = 0;
  for (const ScoredEntry &e : entries) {
    std::string pre;
    for (std::size_t i = 0; i < e.precondition_names.size(); ++i)
      pre += (i ? " & " : "") + e.precondition_names[i];
    const auto &s = e.scored;
    const auto score = [&](double CausalScores::*field) -> std::optional<double> {
      if (!s.scored()) return std::nullopt;
      return (*s.scores).*field;
    };
    rows.push_back({e.consequence_name,
                    {std::to_string(++number) + ".", pre, fixed(score(&CausalScores::eps_avg)), fixed(s.stats.p),
                     fixed(s.stats.p_star), fixed(s.stats.rho), std::to_string(s.stats.support),
                     fixed(score(&CausalScores::eps_min)), fixed(score(&CausalScores::eps_frac)),
                     std::to_string(s.related_count)}});
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto &[g, row] : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  auto print = [&](const Row &row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      // Text columns left-aligned, numbers right-aligned.
      line += c == 1 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };

  print(header);
  const std::string* current = nullptr;
  for (const auto &[g, row] : rows) {
    if (!current || *current != g) {
      out << "-- consequence: " << g << '\n';
      current = &g;
    }
    print(row);
  }
}

} // namespace aptmine
