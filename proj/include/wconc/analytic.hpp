#pragma once

#include <map>
#include <vector>

namespace wconc::analytic {

/// Closed-form evaluation of the concentration probabilities, independent of
/// the state-vector simulator. All functions take squared moduli |alpha_i|^2
/// (which the probabilities depend on exclusively), summing to 1, and treat
/// `pivot` by swapping it into slot 2 first; step indices k then refer to
/// that working frame, k in {1, 3, ..., N}.

/// Conditional success probability of the single parity-check round at step
/// k (the PPC pipeline's per-step factor).
double p_step_ppc(const std::vector<double>& alphas2, int k, int pivot = 2);

/// Product of p_step_ppc over k = 1, 3, ..., N.
double p_total_ppc(const std::vector<double>& alphas2, int pivot = 2);

/// The telescoped closed form of the same total,
///   N a_1 a_2 ... a_N / [(a_2+a_1)(a_2+a_3)...(a_2+a_N)],  a_i = |alpha_i|^2,
/// evaluated directly as an independent algebraic route.
double p_total_ppc_closed_form(const std::vector<double>& alphas2, int pivot = 2);

/// Probability that step k succeeds exactly at iteration m, conditioned on
/// all prior steps' success (and including this step's m-1 leading odd
/// outcomes). At m = 1 this equals p_step_ppc. Series terms that underflow
/// double precision evaluate to 0.
double p_step_cpc(const std::vector<double>& alphas2, int k, int m, int pivot = 2);

struct ProbabilityTable {
    std::vector<int> steps;                             // 1, 3, ..., N
    std::map<int, std::vector<double>> per_step_per_m;  // k -> [P^k_1 .. P^k_max_m]
    std::map<int, double> per_step_sum;
    double total;
};

/// Full iteration table truncated at max_m: per-step rows, row sums, and
/// their product.
ProbabilityTable p_total_cpc(const std::vector<double>& alphas2, int max_m, int pivot = 2);

}  // namespace wconc::analytic
