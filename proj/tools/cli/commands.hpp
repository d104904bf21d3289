#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cartanlab/report.hpp"

namespace cartanlab::cli {

/// Exit codes of the command line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// {"report", "entries", "checks", "result"}.
nlohmann::ordered_json report_json(const Report& report);

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartanlab::cli
