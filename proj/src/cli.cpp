#include "wconc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "wconc/analytic.hpp"
#include "wconc/montecarlo.hpp"
#include "wconc/serialize.hpp"
#include "wconc/verify.hpp"

namespace wconc::cli {

namespace {

WCoefficients make_coefficients(const RunConfig& config) {
    if (config.alphas.empty()) {
        throw std::invalid_argument("no coefficients given (use --alphas or a config file)");
    }
    return WCoefficients(config.alphas);
}

int resolve_pivot(const RunConfig& config, const WCoefficients& coeffs) {
    if (config.pivot) {
        if (*config.pivot < 1 || *config.pivot > coeffs.n()) {
            throw std::invalid_argument("pivot index out of range");
        }
        return *config.pivot;
    }
    return select_pivot(coeffs);
}

void write_output(const RunConfig& config, const std::string& payload, std::ostream& out) {
    if (config.out.empty()) {
        out << payload;
        if (payload.empty() || payload.back() != '\n') out << '\n';
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + config.out);
    file << payload;
}

// Headline values are additionally rounded to five decimals.
std::string round5(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5f", value);
    return buf;
}

std::string sig6(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        file >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    RunConfig config;
    if (doc.contains("alphas")) {
        if (!doc["alphas"].is_array()) throw std::invalid_argument("\"alphas\" must be an array");
        for (const auto& entry : doc["alphas"]) {
            if (entry.is_number()) {
                config.alphas.emplace_back(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                       entry[1].is_number()) {
                config.alphas.emplace_back(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw std::invalid_argument("\"alphas\" entries must be reals or [re, im] pairs");
            }
        }
    }
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer() ||
            doc["n"].get<long>() != static_cast<long>(config.alphas.size())) {
            throw std::invalid_argument("\"n\" must match the number of alphas");
        }
    }
    if (doc.contains("gate")) {
        const std::string gate = doc["gate"].get<std::string>();
        if (gate == "ppc") {
            config.gate = GateKind::PPC;
        } else if (gate == "cpc") {
            config.gate = GateKind::CPC;
        } else {
            throw std::invalid_argument("\"gate\" must be \"ppc\" or \"cpc\"");
        }
    }
    if (doc.contains("max_m")) {
        if (!doc["max_m"].is_number_integer() || doc["max_m"].get<int>() < 1) {
            throw std::invalid_argument("\"max_m\" must be an integer >= 1");
        }
        config.max_m = doc["max_m"].get<int>();
    }
    if (doc.contains("pivot")) {
        if (doc["pivot"].is_string()) {
            if (doc["pivot"].get<std::string>() != "auto") {
                throw std::invalid_argument("\"pivot\" must be \"auto\" or an index");
            }
            config.pivot.reset();
        } else if (doc["pivot"].is_number_integer()) {
            config.pivot = doc["pivot"].get<int>();
        } else {
            throw std::invalid_argument("\"pivot\" must be \"auto\" or an index");
        }
    }
    if (doc.contains("trials")) {
        if (!doc["trials"].is_number_integer() || doc["trials"].get<long>() < 1) {
            throw std::invalid_argument("\"trials\" must be an integer >= 1");
        }
        config.trials = doc["trials"].get<long>();
    }
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("format")) {
        config.format = doc["format"].get<std::string>();
        if (config.format != "csv" && config.format != "json") {
            throw std::invalid_argument("\"format\" must be \"csv\" or \"json\"");
        }
    }
    if (doc.contains("out")) config.out = doc["out"].get<std::string>();
    return config;
}

void set_alphas_from_flag(RunConfig& config, const std::string& alphas_flag) {
    config.alphas.clear();
    std::stringstream ss(alphas_flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            config.alphas.emplace_back(v, 0.0);
        } catch (const std::exception&) {
            throw std::invalid_argument("--alphas entries must be real numbers: '" + item + "'");
        }
    }
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const WCoefficients coeffs = make_coefficients(config);
        const int pivot = resolve_pivot(config, coeffs);
        const ConcentrationReport report = config.gate == GateKind::PPC
                                               ? ppc_run(coeffs, pivot)
                                               : cpc_run(coeffs, config.max_m, pivot);

        out << "gate=" << to_string(report.gate) << " n=" << coeffs.n() << " pivot=" << pivot
            << " max_m=" << report.max_m << '\n';
        for (int k : report.steps) {
            out << "  step " << k << ": p = " << sig6(report.per_step_p.at(k)) << '\n';
        }
        out << "total = " << sig6(report.total_p) << " (~" << round5(report.total_p) << ")"
            << ", fidelity = " << sig6(report.final_fidelity) << '\n';

        write_output(config, to_json(report).dump(2), out);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const WCoefficients coeffs = make_coefficients(config);
        const int pivot = resolve_pivot(config, coeffs);
        const auto table = analytic::p_total_cpc(coeffs.alphas2(), config.max_m, pivot);
        const std::string payload =
            config.format == "csv" ? sweep_csv(table) : sweep_json(table).dump(2);
        write_output(config, payload, out);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

int cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const WCoefficients coeffs = make_coefficients(config);
        const int pivot = resolve_pivot(config, coeffs);
        const Estimate est =
            estimate(coeffs, config.gate, config.max_m, pivot, config.trials, config.seed);

        const double analytic_total =
            config.gate == GateKind::PPC
                ? analytic::p_total_ppc(coeffs.alphas2(), pivot)
                : analytic::p_total_cpc(coeffs.alphas2(), config.max_m, pivot).total;

        out << "p_hat = " << sig6(est.p_hat) << " +- " << sig6(est.stderr_) << " ("
            << est.trials << " trials, seed " << est.seed << ")\n";
        out << "analytic = " << sig6(analytic_total) << ", |p_hat - analytic| = "
            << sig6(std::abs(est.p_hat - analytic_total)) << '\n';

        nlohmann::json doc = to_json(est);
        doc["analytic_total"] = analytic_total;
        write_output(config, doc.dump(2), out);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    try {
        VerifyConfig config;
        config.n_max = options.n_max;
        config.instances = options.instances;
        config.max_m = options.max_m;
        config.seed = options.seed;
        config.inject_error = options.inject_error;

        const VerifyReport report = run_verification(config);

        out << std::left;
        for (const auto& eq : report.equations) {
            out << (eq.failures == 0 ? "PASS  " : "FAIL  ") << std::setw(56) << eq.name
                << " checks=" << eq.checks << " max|err|=" << sig6(eq.max_abs_err) << '\n';
        }
        for (const auto& note : report.notes) out << "note: " << note << '\n';
        if (!report.all_pass) {
            err << "verification mismatches (replay instances):\n";
            for (const auto& dump : report.mismatch_dumps) err << "  " << dump << '\n';
            return kExitVerifyMismatch;
        }
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

}  // namespace wconc::cli
