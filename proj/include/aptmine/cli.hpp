#pragma once

#include <iosfwd>

namespace aptmine {

/// Entry point of the `aptmine` tool (subcommands ingest, mine, compare,
/// report, synth). Returns the process exit status; diagnostics go to `err`.
/// Output files are written through a temporary and renamed, so a failed run
/// leaves no partial file behind.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace aptmine
