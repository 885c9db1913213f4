#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace specmux {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitConstraintViolation = 3,
    kExitOracleFailure = 4,
};

struct RunOptions {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool counts = false;   // counts instead of probabilities
    bool poisson = false;  // Poisson-sample the counts
};

std::vector<std::string> subcommand_names();

/// Runs one subcommand, writing its CSV files and a manifest into
/// options.out_dir. Progress goes to `log`, errors to `err`.
int run(const RunOptions& options, std::ostream& log, std::ostream& err);

}  // namespace specmux
