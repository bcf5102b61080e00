#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wconc/protocol.hpp"

namespace wconc::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyMismatch = 1;
inline constexpr int kExitInvalidInput = 2;

/// One run's parameters, from a JSON config file and/or flags (flags win).
struct RunConfig {
    std::vector<Complex> alphas;
    GateKind gate = GateKind::PPC;
    int max_m = 1;
    std::optional<int> pivot;  // nullopt = auto (smallest |alpha|)
    long trials = 100000;
    std::uint64_t seed = 1;
    std::string format = "json";  // "csv" | "json" (sweep output)
    std::string out;              // empty = stdout
};

/// Reads a config file: a single JSON object whose fields mirror RunConfig
/// ("alphas" entries are reals or [re, im] pairs; "pivot" is "auto" or an
/// index). Throws std::invalid_argument naming the violated field.
RunConfig load_config(const std::string& path);

/// Applies "alphas" given as a comma-separated list of reals.
void set_alphas_from_flag(RunConfig& config, const std::string& alphas_flag);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    int n_max = 6;
    int instances = 100;
    int max_m = 4;
    std::uint64_t seed = 20120815;
    /// Test hook forwarded to VerifyConfig; not exposed as a flag.
    double inject_error = 0.0;
};

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace wconc::cli
