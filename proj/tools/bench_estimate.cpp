// Throughput comparison of the OpenMP Monte Carlo estimator against the
// serial reference, on the five-photon benchmark instance. The two must
// agree bit-for-bit; this tool reports timings and checks that.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wconc/analytic.hpp"
#include "wconc/montecarlo.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    long trials = 200000;
    if (argc > 1) trials = std::strtol(argv[1], nullptr, 10);

    const auto coeffs = wconc::WCoefficients::from_reals({0.5, 0.5, 0.5, 0.3, 0.4});
    const std::uint64_t seed = 99;

#ifdef _OPENMP
    std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled at build time\n");
#endif

    struct Case {
        const char* name;
        wconc::GateKind gate;
        int max_m;
    };
    const Case cases[] = {{"ppc", wconc::GateKind::PPC, 1}, {"cpc m=8", wconc::GateKind::CPC, 8}};

    for (const Case& c : cases) {
        auto t0 = Clock::now();
        const auto serial = wconc::estimate_serial(coeffs, c.gate, c.max_m, 2, trials, seed);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel = wconc::estimate(coeffs, c.gate, c.max_m, 2, trials, seed);
        const double t_parallel = seconds_since(t0);

        const double analytic = c.gate == wconc::GateKind::PPC
                                    ? wconc::analytic::p_total_ppc(coeffs.alphas2())
                                    : wconc::analytic::p_total_cpc(coeffs.alphas2(), c.max_m).total;

        const bool identical = serial.p_hat == parallel.p_hat;
        std::printf("%-8s trials=%ld serial=%.3fs (%.0f/s) parallel=%.3fs (%.0f/s) "
                    "speedup=%.2fx p_hat=%.6f analytic=%.6f identical=%s\n",
                    c.name, trials, t_serial, trials / t_serial, t_parallel,
                    trials / t_parallel, t_serial / t_parallel, parallel.p_hat, analytic,
                    identical ? "yes" : "NO");
        if (!identical) return 1;
    }
    return 0;
}
