#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace antdyn::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 2;
inline constexpr int kConfigError = 3;
inline constexpr int kInternalError = 4;

/// Runs one subcommand: gen-synth, validate, simulate, replay-check, evolve,
/// render. `args` excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace antdyn::cli
