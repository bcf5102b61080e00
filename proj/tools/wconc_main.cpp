#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wconc/cli.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string alphas;
    std::string gate;
    int max_m = 0;
    std::string pivot;
    long trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string format;
    std::string out;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    cmd->add_option("--alphas", flags.alphas, "comma-separated coefficients, e.g. 0.5,0.5,0.5,0.3,0.4");
    cmd->add_option("--gate", flags.gate, "parity gate: ppc | cpc")
        ->check(CLI::IsMember({"ppc", "cpc"}));
    cmd->add_option("--max-m", flags.max_m, "iteration limit per step (cpc)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pivot", flags.pivot, "pivot index (1-based) or 'auto'");
    cmd->add_option("--trials", flags.trials, "Monte Carlo trial count")->check(CLI::PositiveNumber);
    auto* seed_opt = cmd->add_option("--seed", flags.seed, "RNG seed");
    cmd->callback([seed_opt, &flags] { flags.seed_set = seed_opt->count() > 0; });
    cmd->add_option("--format", flags.format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", flags.out, "output path (default: stdout)");
}

wconc::cli::RunConfig build_config(const CommonFlags& flags) {
    wconc::cli::RunConfig config;
    if (!flags.config_path.empty()) config = wconc::cli::load_config(flags.config_path);
    if (!flags.alphas.empty()) wconc::cli::set_alphas_from_flag(config, flags.alphas);
    if (!flags.gate.empty()) {
        config.gate = flags.gate == "cpc" ? wconc::GateKind::CPC : wconc::GateKind::PPC;
    }
    if (flags.max_m > 0) config.max_m = flags.max_m;
    if (!flags.pivot.empty()) {
        if (flags.pivot == "auto") {
            config.pivot.reset();
        } else {
            try {
                std::size_t pos = 0;
                const int p = std::stoi(flags.pivot, &pos);
                if (pos != flags.pivot.size()) throw std::invalid_argument(flags.pivot);
                config.pivot = p;
            } catch (const std::exception&) {
                throw std::invalid_argument("--pivot must be an index or 'auto'");
            }
        }
    }
    if (flags.trials > 0) config.trials = flags.trials;
    if (flags.seed_set) config.seed = flags.seed;
    if (!flags.format.empty()) config.format = flags.format;
    if (!flags.out.empty()) config.out = flags.out;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"W-state entanglement concentration calculator and simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, estimate_flags;
    auto* run_cmd = app.add_subcommand("run", "full concentration run: report with trace");
    add_common_flags(run_cmd, run_flags);
    auto* sweep_cmd =
        app.add_subcommand("sweep", "per-step iteration table (k, m) as CSV or JSON");
    add_common_flags(sweep_cmd, sweep_flags);
    auto* estimate_cmd =
        app.add_subcommand("estimate", "Monte Carlo estimate of the total success probability");
    add_common_flags(estimate_cmd, estimate_flags);

    wconc::cli::VerifyOptions verify_options;
    auto* verify_cmd = app.add_subcommand(
        "verify", "cross-check closed forms against the brute-force simulator");
    verify_cmd->add_option("--n-max", verify_options.n_max, "largest photon number (<= 8)");
    verify_cmd->add_option("--instances", verify_options.instances,
                           "random instances per photon number");
    verify_cmd->add_option("--max-m", verify_options.max_m, "iterations checked per step");
    verify_cmd->add_option("--seed", verify_options.seed, "suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? wconc::cli::kExitOk : wconc::cli::kExitInvalidInput;
    }

    try {
        if (run_cmd->parsed()) {
            return wconc::cli::cmd_run(build_config(run_flags), std::cout, std::cerr);
        }
        if (sweep_cmd->parsed()) {
            return wconc::cli::cmd_sweep(build_config(sweep_flags), std::cout, std::cerr);
        }
        if (estimate_cmd->parsed()) {
            return wconc::cli::cmd_estimate(build_config(estimate_flags), std::cout, std::cerr);
        }
        if (verify_cmd->parsed()) {
            return wconc::cli::cmd_verify(verify_options, std::cout, std::cerr);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return wconc::cli::kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wconc::cli::kExitInvalidInput;
    }
    return wconc::cli::kExitInvalidInput;
}
