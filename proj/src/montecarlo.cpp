#include "wconc/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wconc {

namespace {

// One trajectory over a prepared working frame (avoids re-validating and
// re-pivoting per trial).
bool sample_one(const PureState& initial, const WCoefficients& working,
                const std::vector<int>& steps, GateKind gate, int max_m, SplitMix64& rng,
                std::map<int, int>* iterations_used, PureState* final_state) {
    PureState state = initial;
    for (int k : steps) {
        bool step_done = false;
        for (int m = 1; m <= max_m; ++m) {
            auto uniform = [&rng]() { return rng.uniform(); };
            StepRecord rec = run_step_sampled(state, working, k, m, gate, uniform);
            if (rec.parity.is_even()) {
                state = std::move(rec.post_state);
                if (iterations_used != nullptr) (*iterations_used)[k] = m;
                step_done = true;
                break;
            }
            if (gate == GateKind::PPC || rec.post_state.is_zero()) return false;
            state = std::move(rec.post_state);  // retry-ready odd branch
        }
        if (!step_done) return false;
    }
    if (final_state != nullptr) *final_state = std::move(state);
    return true;
}

}  // namespace

TrialResult sample_run(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot,
                       std::uint64_t seed) {
    if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
    const WCoefficients working = apply_pivot(coeffs, pivot);
    const int n = working.n();
    std::vector<int> steps{1};
    for (int k = 3; k <= n; ++k) steps.push_back(k);
    const PureState initial = w_state(working, protocol_modes(n));

    SplitMix64 rng(seed);
    TrialResult result;
    PureState final_state;
    const int effective_max_m = gate == GateKind::PPC ? 1 : max_m;
    result.success = sample_one(initial, working, steps, gate, effective_max_m, rng,
                                &result.iterations_used, &final_state);
    if (result.success) {
        result.fidelity = max_w_fidelity(final_state, protocol_modes(n));
    }
    return result;
}

namespace {

Estimate estimate_impl(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot,
                       long trials, std::uint64_t seed, bool parallel) {
    if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
    if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
    const WCoefficients working = apply_pivot(coeffs, pivot);
    const int n = working.n();
    std::vector<int> steps{1};
    for (int k = 3; k <= n; ++k) steps.push_back(k);
    const PureState initial = w_state(working, protocol_modes(n));
    const int effective_max_m = gate == GateKind::PPC ? 1 : max_m;

    long successes = 0;
#pragma omp parallel for reduction(+ : successes) schedule(static) if (parallel)
    for (long t = 0; t < trials; ++t) {
        SplitMix64 rng(SplitMix64::trial_seed(seed, t));
        if (sample_one(initial, working, steps, gate, effective_max_m, rng, nullptr, nullptr)) {
            ++successes;
        }
    }

    Estimate est;
    est.trials = trials;
    est.seed = seed;
    est.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
}

}  // namespace

Estimate estimate(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot, long trials,
                  std::uint64_t seed) {
    bool parallel = false;
#ifdef _OPENMP
    // A one-thread team only adds scheduling overhead; the counter-based
    // seeding makes both paths bit-identical anyway.
    parallel = omp_get_max_threads() > 1;
#endif
    return estimate_impl(coeffs, gate, max_m, pivot, trials, seed, parallel);
}

Estimate estimate_serial(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot,
                         long trials, std::uint64_t seed) {
    return estimate_impl(coeffs, gate, max_m, pivot, trials, seed, false);
}

}  // namespace wconc
