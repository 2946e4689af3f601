#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace consensus::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr const char* kSeedEnvVar = "CONSENSUS_KIT_SEED";

/// Exit codes: 0 certified / succeeded, 2 not certified / design failed, 1 input or internal error.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitNegative = 2 };

/// --seed wins over the environment variable, which wins over kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value);

/// Runs one invocation. `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace consensus::cli
