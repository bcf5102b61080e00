#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wconc/optics.hpp"
#include "wconc/qstate.hpp"

namespace wconc {

enum class GateKind : std::uint8_t { PPC = 0, CPC = 1 };

const char* to_string(GateKind g);

/// Photon modes used by the concentration pipeline: "a1" ... "aN".
std::vector<ModeId> protocol_modes(int n);
/// Mode of photon k (1-based).
ModeId photon_mode(int k);
/// Mode the per-step ancilla photon is prepared in.
inline const ModeId kAncillaMode = "anc";

/// Which single photon to prepare for step K, iteration M. The pivot is the
/// coefficient index playing the alpha_2 role.
struct AncillaSpec {
    int step_k = 1;
    int iteration_m = 1;
    int pivot = 2;
};

/// Ancilla amplitudes for step k, iteration m:
///   c_h ~ alpha_k^(2^(m-1)),  c_v ~ alpha_pivot^(2^(m-1)),  normalized.
/// The m-th iteration doubles the exponents of the previous one. Complex
/// coefficients keep their phases so that downstream corrections cancel
/// them; for real input the result is real.
std::pair<Complex, Complex> ancilla_coeffs(const WCoefficients& coeffs, int step_k,
                                           int iteration_m, int pivot);
std::pair<Complex, Complex> ancilla_coeffs(const WCoefficients& coeffs, const AncillaSpec& spec);

/// One post-measurement branch of a parity check round.
struct MeasuredBranch {
    PureState state;   // renormalized; Minus branches carry the phase correction
    double p_pm = 0.0;
    bool corrected = false;
};

struct ParityStepBranch {
    double probability = 0.0;
    MeasuredBranch plus;
    MeasuredBranch minus;
};

/// All branches of one parity-check round, with Born probabilities.
struct StepOutcome {
    ParityStepBranch even;
    /// Retry-ready lesser-entangled branch. Absent under PPC: the
    /// post-selection destroys the odd component, so its probability is
    /// implicit (1 - even.probability) and no state survives.
    std::optional<ParityStepBranch> odd;
};

/// Runs one parity-check round of the concentration pipeline on photon
/// `step_k` (state must be over protocol_modes(n); the working coefficient
/// frame has the pivot in slot 2). Prepares the iteration-m ancilla, tensors
/// it in, applies the chosen parity gate between the ancilla and photon
/// step_k, measures the surviving ancilla-side photon in |+->, and applies
/// the phase_flip_v correction to photon step_k's mode on every Minus
/// outcome.
StepOutcome run_step(const PureState& state, const WCoefficients& working, int step_k,
                     int iteration_m, GateKind gate);

struct StepRecord {
    int step_k = 0;
    int iteration_m = 0;
    ParityOutcome parity;
    double p_parity = 0.0;  // conditional on reaching this round
    PmOutcome pm = PmOutcome::Plus;
    double p_pm = 0.0;
    bool corrected = false;
    PureState post_state;
    /// Product of all parity probabilities along the canonical realized path
    /// to this record (prior steps succeeding at m = 1, this step odd for
    /// m' < m). The +- outcomes both succeed and do not enter the product.
    double cumulative_p = 0.0;
};

/// Sampled variant: draws one parity branch and one +- outcome with their
/// Born probabilities from the exhaustive branch set. `uniform` must return
/// doubles in [0, 1).
StepRecord run_step_sampled(const PureState& state, const WCoefficients& working, int step_k,
                            int iteration_m, GateKind gate,
                            const std::function<double()>& uniform,
                            double cumulative_before = 1.0);

struct ConcentrationReport {
    WCoefficients coeffs;  // as supplied, before the pivot swap
    GateKind gate;
    int max_m;
    int pivot;
    std::vector<int> steps;  // 1, 3, 4, ..., N (working frame)
    /// P^k_m: probability that step k succeeds exactly at iteration m,
    /// conditioned on all prior steps succeeding. Row sums give per_step_p.
    std::map<int, std::vector<double>> per_step_per_m;
    std::map<int, double> per_step_p;
    double total_p;
    double final_fidelity;
    std::vector<StepRecord> trace;
    PureState final_state;
};

/// Full linear-optics pipeline: steps k = 1, 3, ..., N, each a single PPC
/// round (an odd outcome is terminal failure).
ConcentrationReport ppc_run(const WCoefficients& coeffs, int pivot = 2);

/// Full QND pipeline: each step retries its parity check up to max_m times,
/// feeding every odd outcome into the next iteration with a
/// doubled-exponent ancilla.
ConcentrationReport cpc_run(const WCoefficients& coeffs, int max_m, int pivot = 2);

/// Index (1-based) of the smallest |alpha_i|, ties broken by lowest index.
/// Running the protocol with this index in the alpha_2 role maximizes the
/// total success probability.
int select_pivot(const WCoefficients& coeffs);

/// Coefficients with the pivot entry swapped into slot 2 (role relabeling;
/// an involution).
WCoefficients apply_pivot(const WCoefficients& coeffs, int pivot);

}  // namespace wconc
