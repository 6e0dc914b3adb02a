#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace litiscope {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitTraining = 4;

/// Runs one subcommand (synth, ingest-check, train, predict, evaluate). args excludes the
/// program name. Normal output goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace litiscope
