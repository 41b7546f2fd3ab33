#pragma once

#include "experiment_config.hpp"

#include <iosfwd>

namespace bresse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitConfig = 2;

/// Runs one validated experiment, writing CSV files into cfg.out_dir, a
/// summary to `out` and one "error code=..." line per failure to `err`.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses a command line (argv[0] is the program name) and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bresse::cli
