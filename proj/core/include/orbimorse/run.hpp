#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orbimorse/config.hpp"

namespace orbimorse {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// Thm-1.2-style exactness: residuals are compared against this absolute bound.
inline constexpr double kChainTol = 1e-9;
inline constexpr double kDiagonalFactorTol = 0.05;
inline constexpr double kMinShrink = 10.0;

const std::vector<std::string>& subcommands();

struct RunOptions {
  bool strict = false;
  std::string timestamp;  // empty: no timestamp in the report header
};

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::map<std::string, std::string> files;  // CSV artifacts by file name
  std::vector<std::string> failures;          // one line per failed check or error
};

// Never throws for library errors: configuration and catalog problems come
// back as exit code 2 with a diagnostic.
RunOutcome run(const std::string& subcommand, const RunConfig& config,
               const RunOptions& options = {});

// Writes report.json and every CSV into dir (created if missing).
void write_artifacts(const RunOutcome& outcome, const std::string& dir);

}  // namespace orbimorse
