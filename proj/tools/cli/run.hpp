#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cusplab::cli {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

const std::vector<std::string>& command_names();

/// Resolves the config, runs one experiment, writes `<dir>/<prefix><command>.json`
/// plus its CSV tables and prints one PASS/FAIL line per assertion to `out`.
int run(const std::string& command, const std::string& config_path,
        const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err);

}  // namespace cusplab::cli
