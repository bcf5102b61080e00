#include "wconc/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wconc {

const char* to_string(GateKind g) { return g == GateKind::PPC ? "ppc" : "cpc"; }

std::vector<ModeId> protocol_modes(int n) {
    std::vector<ModeId> modes;
    modes.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) modes.push_back(photon_mode(k));
    return modes;
}

ModeId photon_mode(int k) { return "a" + std::to_string(k); }

namespace {

void check_step_index(const WCoefficients& coeffs, int step_k, int pivot) {
    if (pivot < 1 || pivot > coeffs.n()) {
        throw std::invalid_argument("pivot index out of range");
    }
    if (step_k < 1 || step_k > coeffs.n()) {
        throw std::invalid_argument("step index out of range");
    }
    if (step_k == pivot) {
        throw std::invalid_argument("step index equals the pivot (photon " +
                                    std::to_string(pivot) + " is never concentrated)");
    }
}

// a^(2^(m-1)) by repeated squaring; false once it underflows to zero.
bool pow_doubling(Complex& a, int m) {
    for (int j = 1; j < m; ++j) {
        a *= a;
        if (a == Complex{0.0, 0.0}) return false;
    }
    return true;
}

}  // namespace

std::pair<Complex, Complex> ancilla_coeffs(const WCoefficients& coeffs, int step_k,
                                           int iteration_m, int pivot) {
    check_step_index(coeffs, step_k, pivot);
    if (iteration_m < 1) throw std::invalid_argument("iteration index must be >= 1");

    Complex ch = coeffs.alpha(step_k);
    Complex cv = coeffs.alpha(pivot);
    if (!pow_doubling(ch, iteration_m) || !pow_doubling(cv, iteration_m)) {
        // Underflow: rescale by the larger modulus per squaring in log space,
        // so the normalized pair stays finite for any iteration count.
        const double e = std::ldexp(1.0, iteration_m - 1);
        const double lh = e * std::log(std::abs(coeffs.alpha(step_k)));
        const double lv = e * std::log(std::abs(coeffs.alpha(pivot)));
        const double mx = std::max(lh, lv);
        const double ph = e * std::arg(coeffs.alpha(step_k));
        const double pv = e * std::arg(coeffs.alpha(pivot));
        ch = std::polar(std::exp(lh - mx), ph);
        cv = std::polar(std::exp(lv - mx), pv);
    }
    const double s = std::sqrt(std::norm(ch) + std::norm(cv));
    return {ch / s, cv / s};
}

std::pair<Complex, Complex> ancilla_coeffs(const WCoefficients& coeffs, const AncillaSpec& spec) {
    return ancilla_coeffs(coeffs, spec.step_k, spec.iteration_m, spec.pivot);
}

namespace {

ParityStepBranch measure_and_correct(const PureState& parity_state, double probability,
                                     const ModeId& k_mode) {
    ParityStepBranch branch;
    branch.probability = probability;
    if (probability <= 0.0 || parity_state.is_zero()) {
        return branch;
    }
    PmBranches pm = measure_pm(parity_state, kAncillaMode);
    branch.plus = {std::move(pm.plus), pm.p_plus, false};
    PureState minus = pm.p_minus > 0.0 ? phase_flip_v(pm.minus, k_mode) : std::move(pm.minus);
    branch.minus = {std::move(minus), pm.p_minus, pm.p_minus > 0.0};
    return branch;
}

}  // namespace

namespace {

// Parity partition of one round: the renormalized branch states and their
// Born probabilities, computed once and shared by the exhaustive and the
// sampled entry points. Under PPC the odd component is destroyed by the
// post-selection; only its probability remains.
struct StepPartition {
    PureState even;
    double p_even = 0.0;
    PureState odd;  // zero state under PPC
    double p_odd = 0.0;
    bool odd_retained = false;
};

StepPartition partition_step(const PureState& state, const WCoefficients& working, int step_k,
                             int iteration_m, GateKind gate) {
    const auto [c_h, c_v] = ancilla_coeffs(working, step_k, iteration_m, /*pivot=*/2);
    const ModeId k_mode = photon_mode(step_k);
    if (!state.modes().find(k_mode)) {
        throw std::invalid_argument("run_step: state lacks mode " + k_mode);
    }
    const PureState joint = tensor(state, single_photon(c_h, c_v, kAncillaMode));

    StepPartition part;
    if (gate == GateKind::PPC) {
        // Route both photons through the local PBS (in-place ports), then
        // post-select on coincidence.
        const PureState routed = pbs(joint, k_mode, kAncillaMode, k_mode, kAncillaMode);
        auto [even_state, p_even] = ppc_postselect(routed, k_mode, kAncillaMode);
        part.even = std::move(even_state);
        part.p_even = p_even;
        part.odd = PureState::zero(routed.modes_ptr());
        part.p_odd = 1.0 - p_even;
    } else {
        ParityBranches branches = cpc_measure(joint, k_mode, kAncillaMode);
        part.even = std::move(branches.even);
        part.p_even = branches.p_even;
        part.odd = std::move(branches.odd);
        part.p_odd = branches.p_odd;
        part.odd_retained = true;
    }
    return part;
}

}  // namespace

StepOutcome run_step(const PureState& state, const WCoefficients& working, int step_k,
                     int iteration_m, GateKind gate) {
    StepPartition part = partition_step(state, working, step_k, iteration_m, gate);
    const ModeId k_mode = photon_mode(step_k);

    StepOutcome out;
    out.even = measure_and_correct(part.even, part.p_even, k_mode);
    if (part.odd_retained) {
        out.odd = measure_and_correct(part.odd, part.p_odd, k_mode);
    }
    return out;
}

StepRecord run_step_sampled(const PureState& state, const WCoefficients& working, int step_k,
                            int iteration_m, GateKind gate,
                            const std::function<double()>& uniform, double cumulative_before) {
    StepPartition part = partition_step(state, working, step_k, iteration_m, gate);
    const ModeId k_mode = photon_mode(step_k);

    StepRecord rec;
    rec.step_k = step_k;
    rec.iteration_m = iteration_m;

    const double u_parity = uniform();
    const bool even = u_parity < part.p_even;
    const PureState* parity_state = nullptr;
    double parity_probability = 0.0;
    if (even) {
        rec.parity = {Parity::Even};
        rec.p_parity = part.p_even;
        parity_state = &part.even;
        parity_probability = part.p_even;
    } else {
        rec.parity = {Parity::Odd};
        rec.p_parity = part.p_odd;
        if (part.odd_retained) {
            parity_state = &part.odd;
            parity_probability = part.p_odd;
        }
    }
    rec.cumulative_p = cumulative_before * rec.p_parity;

    if (parity_state != nullptr && parity_probability > 0.0 && !parity_state->is_zero()) {
        // Only the drawn branch is materialized; the probabilities above come
        // from the same partition the exhaustive mode reports.
        ParityStepBranch branch = measure_and_correct(*parity_state, parity_probability, k_mode);
        const double u_pm = uniform();
        if (u_pm < branch.plus.p_pm) {
            rec.pm = PmOutcome::Plus;
            rec.p_pm = branch.plus.p_pm;
            rec.corrected = branch.plus.corrected;
            rec.post_state = std::move(branch.plus.state);
        } else {
            rec.pm = PmOutcome::Minus;
            rec.p_pm = branch.minus.p_pm;
            rec.corrected = branch.minus.corrected;
            rec.post_state = std::move(branch.minus.state);
        }
    }
    return rec;
}

namespace {

ConcentrationReport run_concentration(const WCoefficients& coeffs, GateKind gate, int max_m,
                                      int pivot) {
    if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
    if (max_m > 64) throw std::invalid_argument("max_m beyond 64 is not supported");
    const WCoefficients working = apply_pivot(coeffs, pivot);
    const int n = working.n();

    std::vector<int> steps{1};
    for (int k = 3; k <= n; ++k) steps.push_back(k);

    const auto modes = protocol_modes(n);
    PureState state = w_state(working, modes);

    std::map<int, std::vector<double>> per_step_per_m;
    std::map<int, double> per_step_p;
    std::vector<StepRecord> trace;
    double total = 1.0;
    double backbone = 1.0;  // parity-probability product, prior steps at m = 1

    for (int k : steps) {
        double reach = 1.0;  // probability of entering iteration m of this step
        double sum_k = 0.0;
        double p_even_m1 = 0.0;
        PureState current = state;
        PureState next;
        auto& row = per_step_per_m[k];
        row.reserve(static_cast<std::size_t>(max_m));

        for (int m = 1; m <= max_m; ++m) {
            StepOutcome out = run_step(current, working, k, m, gate);
            row.push_back(reach * out.even.probability);
            sum_k += row.back();

            StepRecord rec;
            rec.step_k = k;
            rec.iteration_m = m;
            rec.parity = {Parity::Even};
            rec.p_parity = out.even.probability;
            rec.pm = PmOutcome::Plus;
            rec.p_pm = out.even.plus.p_pm;
            rec.corrected = false;
            rec.post_state = out.even.plus.state;
            rec.cumulative_p = backbone * reach * out.even.probability;
            trace.push_back(std::move(rec));

            if (m == 1) {
                next = out.even.plus.state;
                p_even_m1 = out.even.probability;
            }

            if (!out.odd) break;  // PPC: odd is terminal, no retry
            reach *= out.odd->probability;
            current = out.odd->plus.state;

            if (m == max_m) {
                // Final odd outcome: failure, residual state kept for
                // inspection, contributes nothing to the totals.
                StepRecord fail;
                fail.step_k = k;
                fail.iteration_m = m;
                fail.parity = {Parity::Odd};
                fail.p_parity = out.odd->probability;
                fail.pm = PmOutcome::Plus;
                fail.p_pm = out.odd->plus.p_pm;
                fail.corrected = false;
                fail.post_state = current;
                fail.cumulative_p = backbone * reach;
                trace.push_back(std::move(fail));
            }
        }
        per_step_p[k] = sum_k;
        total *= sum_k;
        backbone *= p_even_m1;
        state = std::move(next);
    }

    const double fidelity = state.is_zero() ? 0.0 : max_w_fidelity(state, modes);

    return ConcentrationReport{coeffs,
                               gate,
                               max_m,
                               pivot,
                               std::move(steps),
                               std::move(per_step_per_m),
                               std::move(per_step_p),
                               total,
                               fidelity,
                               std::move(trace),
                               std::move(state)};
}

}  // namespace

ConcentrationReport ppc_run(const WCoefficients& coeffs, int pivot) {
    return run_concentration(coeffs, GateKind::PPC, 1, pivot);
}

ConcentrationReport cpc_run(const WCoefficients& coeffs, int max_m, int pivot) {
    return run_concentration(coeffs, GateKind::CPC, max_m, pivot);
}

int select_pivot(const WCoefficients& coeffs) {
    const auto a2 = coeffs.alphas2();
    std::size_t best = 0;
    for (std::size_t i = 1; i < a2.size(); ++i) {
        if (a2[i] < a2[best]) best = i;
    }
    return static_cast<int>(best) + 1;
}

WCoefficients apply_pivot(const WCoefficients& coeffs, int pivot) {
    if (pivot < 1 || pivot > coeffs.n()) throw std::invalid_argument("pivot index out of range");
    std::vector<Complex> alphas = coeffs.alphas();
    std::swap(alphas[1], alphas[static_cast<std::size_t>(pivot - 1)]);
    return WCoefficients(std::move(alphas));
}

}  // namespace wconc
