#include "wconc/serialize.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <vector>

namespace wconc {

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

nlohmann::json to_json(const PureState& state) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& name : state.modes().names()) modes.push_back(name);

    nlohmann::json terms = nlohmann::json::array();
    for (const auto& term : state.terms()) {
        nlohmann::json occ = nlohmann::json::object();
        for (std::size_t m = 0; m < state.modes().size(); ++m) {
            const int h = term.occupancy.h_count(m);
            const int v = term.occupancy.v_count(m);
            if (h + v == 0) continue;
            nlohmann::json pols = nlohmann::json::array();
            for (int i = 0; i < h; ++i) pols.push_back("H");
            for (int i = 0; i < v; ++i) pols.push_back("V");
            occ[state.modes().name(m)] = std::move(pols);
        }
        terms.push_back({{"amp", {term.amplitude.real(), term.amplitude.imag()}},
                         {"occ", std::move(occ)}});
    }
    return {{"modes", std::move(modes)}, {"terms", std::move(terms)}};
}

nlohmann::json to_json(const WCoefficients& coeffs) {
    nlohmann::json alphas = nlohmann::json::array();
    for (const auto& a : coeffs.alphas()) alphas.push_back({a.real(), a.imag()});
    return alphas;
}

nlohmann::json to_json(const StepRecord& record) {
    return {{"k", record.step_k},
            {"m", record.iteration_m},
            {"parity", to_string(record.parity.kind)},
            {"probe_shift", record.parity.probe_shift()},
            {"p_parity", record.p_parity},
            {"pm", to_string(record.pm)},
            {"p_pm", record.p_pm},
            {"corrected", record.corrected},
            {"cumulative_p", record.cumulative_p},
            {"post_state", to_json(record.post_state)}};
}

nlohmann::json to_json(const ConcentrationReport& report) {
    nlohmann::json per_step = nlohmann::json::object();
    for (int k : report.steps) {
        per_step[std::to_string(k)] = {{"per_m", report.per_step_per_m.at(k)},
                                       {"sum", report.per_step_p.at(k)}};
    }
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& rec : report.trace) trace.push_back(to_json(rec));
    return {{"alphas", to_json(report.coeffs)},
            {"gate", to_string(report.gate)},
            {"max_m", report.max_m},
            {"pivot", report.pivot},
            {"steps", report.steps},
            {"per_step", std::move(per_step)},
            {"total_p", report.total_p},
            {"final_fidelity", report.final_fidelity},
            {"trace", std::move(trace)}};
}

nlohmann::json to_json(const Estimate& estimate) {
    return {{"p_hat", estimate.p_hat},
            {"stderr", estimate.stderr_},
            {"trials", estimate.trials},
            {"seed", estimate.seed}};
}

nlohmann::json to_json(const VerifyReport& report) {
    nlohmann::json equations = nlohmann::json::array();
    for (const auto& eq : report.equations) {
        equations.push_back({{"name", eq.name},
                             {"checks", eq.checks},
                             {"failures", eq.failures},
                             {"max_abs_err", eq.max_abs_err}});
    }
    return {{"all_pass", report.all_pass},
            {"equations", std::move(equations)},
            {"mismatches", report.mismatch_dumps},
            {"notes", report.notes}};
}

std::string sweep_csv(const analytic::ProbabilityTable& table) {
    std::ostringstream os;
    os << "k,m,p_step,p_step_cumsum,p_total_cumprod\n";
    if (table.steps.empty()) return os.str();
    const std::size_t max_m = table.per_step_per_m.at(table.steps.front()).size();

    // Total if every step stopped at iteration m.
    std::vector<double> total_at_m(max_m, 1.0);
    for (int k : table.steps) {
        const auto& row = table.per_step_per_m.at(k);
        double cumsum = 0.0;
        for (std::size_t m = 0; m < max_m; ++m) {
            cumsum += row[m];
            total_at_m[m] *= cumsum;
        }
    }

    for (int k : table.steps) {
        const auto& row = table.per_step_per_m.at(k);
        double cumsum = 0.0;
        for (std::size_t m = 0; m < max_m; ++m) {
            cumsum += row[m];
            os << k << ',' << m + 1 << ',' << format_double(row[m]) << ','
               << format_double(cumsum) << ',' << format_double(total_at_m[m]) << '\n';
        }
    }
    return os.str();
}

nlohmann::json sweep_json(const analytic::ProbabilityTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    if (table.steps.empty()) return {{"rows", rows}};
    const std::size_t max_m = table.per_step_per_m.at(table.steps.front()).size();
    std::vector<double> total_at_m(max_m, 1.0);
    for (int k : table.steps) {
        const auto& row = table.per_step_per_m.at(k);
        double cumsum = 0.0;
        for (std::size_t m = 0; m < max_m; ++m) {
            cumsum += row[m];
            total_at_m[m] *= cumsum;
        }
    }
    for (int k : table.steps) {
        const auto& row = table.per_step_per_m.at(k);
        double cumsum = 0.0;
        for (std::size_t m = 0; m < max_m; ++m) {
            cumsum += row[m];
            rows.push_back({{"k", k},
                            {"m", m + 1},
                            {"p_step", row[m]},
                            {"p_step_cumsum", cumsum},
                            {"p_total_cumprod", total_at_m[m]}});
        }
    }
    return {{"rows", std::move(rows)}};
}

}  // namespace wconc
