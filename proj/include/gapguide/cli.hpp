#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gapguide/config.hpp"

namespace gapguide::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Commands accepted on the command line.
const std::vector<std::string>& commands();
std::string usage();

/// Parses `gapguide <command> --config <path> [--out <dir>] [--seed <int>] [--threads <int>]`,
/// runs the command and maps errors to exit codes.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one command; throws library errors. Returns the JSON summary written to stdout.
nlohmann::json run(const std::string& command, const RunConfig& cfg);

// Individual commands (artifacts go to cfg.out_dir).
nlohmann::json run_nu(const RunConfig& cfg);
nlohmann::json run_check(const RunConfig& cfg);
nlohmann::json run_residual(const RunConfig& cfg);
nlohmann::json run_bands(const RunConfig& cfg);
nlohmann::json run_defect(const RunConfig& cfg);
nlohmann::json run_decay(const RunConfig& cfg);
nlohmann::json run_sweep(const RunConfig& cfg);

/// Builds summary.md and plot scripts from the artifacts in `dir`.
/// Missing artifacts are listed; the function never fails on absent files.
nlohmann::json run_report(const std::filesystem::path& dir);

/// Human-readable verdict line of the `check` command.
std::string check_line(bool satisfied, double margin);

}  // namespace gapguide::cli
