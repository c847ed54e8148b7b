#pragma once

#include <filesystem>
#include <optional>

#include "mildeig/config.hpp"

namespace mildeig {

enum class Command { Solve, Sweep, Check, Verify, OracleCompare };

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides config output.dir
    std::optional<unsigned long> seed;             // overrides solver.seed
    bool quiet = false;
    std::filesystem::path certificate_path;  // verify
    std::filesystem::path trajectory_path;   // verify
};

/// Exit status: 0 success/pass, 1 reported failure (non-convergence,
/// hypothesis fail, verification fail), 2 is reserved for configuration
/// errors and produced by the CLI wrapper. Artifacts land in opts.out_dir;
/// diagnostics go to stderr.
int run_command(Command cmd, const ConfigDocument& doc, const RunOptions& opts);

}  // namespace mildeig
