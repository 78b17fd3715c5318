#pragma once

#include "aptmine/causality.hpp"
#include "aptmine/extraction.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aptmine {

// Rules and scored-rules files are JSON lines: a header object carrying the
// format name, version and full parameter set, then one record per line with
// a fixed field order.

inline constexpr std::string_view kRulesFormat = "aptmine-rules";
inline constexpr std::string_view kScoredFormat = "aptmine-scored";
inline constexpr int kRuleFileVersion = 1;

void write_rules_file(std::ostream &out, const ExtractionReport &report, const AtomRegistry &registry,
                      const ExtractParams &params);

struct RulesFile {
  ExtractParams params;
  std::vector<MinedRule> rules;
};

/// Checks every record against `registry` (ids in range, names matching,
/// consequence an action atom). Throws FormatError.
RulesFile read_rules_file(std::istream &in, const AtomRegistry &registry);

/// k = std::nullopt writes "all".
void write_scored_file(std::ostream &out, const std::vector<RankedGroup> &groups, const AtomRegistry &registry,
                       const ExtractParams &params, std::optional<std::size_t> k);

struct ScoredEntry {
  std::size_t rank = 0; ///< 1-based within the consequence group
  ScoredRule scored;
  std::string consequence_name;
  std::vector<std::string> precondition_names;
};

/// Throws FormatError.
std::vector<ScoredEntry> read_scored_file(std::istream &in);

/// Plain-text table, one block per consequence, columns
/// No. | Precondition | eps_avg | p | p* | rho | s | eps_min | eps_frac | related.
void render_report(std::ostream &out, const std::vector<ScoredEntry> &entries);

} // namespace aptmine
