#include "wconc/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wconc::analytic {

namespace {

constexpr double kSumTol = 1e-9;

// Working-frame squared moduli: pivot swapped into slot 2 (0-based index 1).
std::vector<double> working_frame(const std::vector<double>& alphas2, int pivot) {
    const int n = static_cast<int>(alphas2.size());
    if (n < 2) throw std::invalid_argument("need at least two coefficients");
    if (pivot < 1 || pivot > n) throw std::invalid_argument("pivot index out of range");
    double sum = 0.0;
    for (double a : alphas2) {
        if (a <= 0.0) throw std::invalid_argument("squared moduli must be positive");
        sum += a;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        throw std::invalid_argument("squared moduli must sum to 1");
    }
    std::vector<double> w = alphas2;
    std::swap(w[1], w[static_cast<std::size_t>(pivot - 1)]);
    return w;
}

void check_step(int k, int n) {
    if (k < 1 || k > n || k == 2) {
        throw std::invalid_argument("step index must be 1 or 3..N in the working frame");
    }
}

}  // namespace

// For step k, iteration m, with pivot value p = a_2, step value q = a_k and
// tail T_k = a_{k+1} + ... + a_N (a_i = |alpha_i|^2, working frame):
//
//   P^k_m = [ (C+1) p^e q^e + q^e p^(e-1) T_k ]
//           / [ D_k * prod_{j=1..m} (p^(2^(j-1)) + q^(2^(j-1))) ]
//
// with e = 2^(m-1), C the number of already-equalized slots entering the
// step (1 for k = 1, else k - 1) and D_k = C p + q + T_k the squared norm
// entering the step. At m = 1 this is the single-round per-step factor; for
// k = N the tail is empty.
double p_step_cpc(const std::vector<double>& alphas2, int k, int m, int pivot) {
    if (m < 1) throw std::invalid_argument("iteration index must be >= 1");
    const auto w = working_frame(alphas2, pivot);
    check_step(k, static_cast<int>(w.size()));

    const int n = static_cast<int>(w.size());
    const double p = w[1];
    const double q = w[static_cast<std::size_t>(k - 1)];

    double tail = 0.0;
    for (int j = (k == 1 ? 3 : k + 1); j <= n; ++j) tail += w[static_cast<std::size_t>(j - 1)];
    const int companions = k == 1 ? 1 : k - 1;
    const double d_k = static_cast<double>(companions) * p + q + tail;

    // Denominator: D_k * prod_{j=1..m} (p^(2^(j-1)) + q^(2^(j-1))).
    double denom = d_k;
    double pj = p, qj = q;
    for (int j = 1; j <= m; ++j) {
        denom *= pj + qj;
        if (j < m) {
            pj *= pj;
            qj *= qj;
        }
    }
    // After the loop pj = p^e, qj = q^e with e = 2^(m-1).
    const double numerator = static_cast<double>(companions + 1) * pj * qj +
                             (p > 0.0 ? qj * (pj / p) * tail : 0.0);
    if (numerator <= 0.0 || denom <= 0.0) return 0.0;  // graceful underflow for extreme m
    return numerator / denom;
}

double p_step_ppc(const std::vector<double>& alphas2, int k, int pivot) {
    return p_step_cpc(alphas2, k, 1, pivot);
}

double p_total_ppc(const std::vector<double>& alphas2, int pivot) {
    const int n = static_cast<int>(alphas2.size());
    double total = p_step_ppc(alphas2, 1, pivot);
    for (int k = 3; k <= n; ++k) total *= p_step_ppc(alphas2, k, pivot);
    return total;
}

double p_total_ppc_closed_form(const std::vector<double>& alphas2, int pivot) {
    const auto w = working_frame(alphas2, pivot);
    const int n = static_cast<int>(w.size());
    double numerator = static_cast<double>(n);
    for (double a : w) numerator *= a;
    double denominator = 1.0;
    for (int j = 1; j <= n; ++j) {
        if (j == 2) continue;
        denominator *= w[1] + w[static_cast<std::size_t>(j - 1)];
    }
    return numerator / denominator;
}

ProbabilityTable p_total_cpc(const std::vector<double>& alphas2, int max_m, int pivot) {
    if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
    const int n = static_cast<int>(alphas2.size());

    ProbabilityTable table;
    table.steps.push_back(1);
    for (int k = 3; k <= n; ++k) table.steps.push_back(k);

    table.total = 1.0;
    for (int k : table.steps) {
        auto& row = table.per_step_per_m[k];
        row.reserve(static_cast<std::size_t>(max_m));
        double sum = 0.0;
        for (int m = 1; m <= max_m; ++m) {
            row.push_back(p_step_cpc(alphas2, k, m, pivot));
            sum += row.back();
        }
        table.per_step_sum[k] = sum;
        table.total *= sum;
    }
    return table;
}

}  // namespace wconc::analytic
