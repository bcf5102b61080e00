#pragma once

#include <cstdint>
#include <map>

#include "wconc/protocol.hpp"

namespace wconc {

/// Counter-based splittable PRNG (splitmix64). Per-trial streams are derived
/// from (base seed, trial index) alone, so results are independent of
/// execution order and thread count.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Fixed splitting rule: stream seed for one trial of a run.
    static std::uint64_t trial_seed(std::uint64_t base, long trial) {
        SplitMix64 g(base ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(trial) + 1)));
        return g.next();
    }

  private:
    std::uint64_t state_;
};

struct TrialResult {
    bool success = false;
    /// Iteration at which each completed step succeeded.
    std::map<int, int> iterations_used;
    /// 1.0 on success by construction (recorded for verification); 0.0 on
    /// failure.
    double fidelity = 0.0;
};

/// One stochastic trajectory of the full protocol: every parity check and
/// +- measurement is drawn with its Born probability. Deterministic given
/// the seed.
TrialResult sample_run(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot,
                       std::uint64_t seed);

struct Estimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Success-probability estimate over `trials` independent trajectories.
/// Runs trials in parallel when built with OpenMP; the counter-based
/// per-trial seeding makes the result bit-identical to estimate_serial.
Estimate estimate(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot, long trials,
                  std::uint64_t seed);

/// Single-threaded reference implementation of the same estimator.
Estimate estimate_serial(const WCoefficients& coeffs, GateKind gate, int max_m, int pivot,
                         long trials, std::uint64_t seed);

}  // namespace wconc
