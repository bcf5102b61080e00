#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "test_util.hpp"
#include "wconc/analytic.hpp"

using namespace wconc;
using testutil::close;

namespace {

const std::vector<double> kBenchA2{0.25, 0.25, 0.25, 0.09, 0.16};

std::vector<double> random_a2(int n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> a2(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& a : a2) {
        a = u(gen);
        sum += a;
    }
    for (auto& a : a2) a /= sum;
    return a2;
}

}  // namespace

TEST_CASE("p_step_ppc: benchmark values and uniform closed form") {
    CHECK(close(analytic::p_step_ppc(kBenchA2, 1), 0.5));
    CHECK(close(analytic::p_step_ppc(kBenchA2, 3), 0.5));
    // direct evaluations frozen from the independent enumeration
    CHECK(close(analytic::p_step_ppc(kBenchA2, 4), 0.09 * (4 * 0.25 + 0.16) / (1.0 * 0.34)));
    CHECK(close(analytic::p_step_ppc(kBenchA2, 5), 5 * 0.25 * 0.16 / (1.16 * 0.41)));

    for (int n = 2; n <= 8; ++n) {
        const std::vector<double> uniform(static_cast<std::size_t>(n), 1.0 / n);
        CHECK(close(analytic::p_step_ppc(uniform, 1), 0.5));
        for (int k = 3; k <= n; ++k) CHECK(close(analytic::p_step_ppc(uniform, k), 0.5));
    }

    CHECK_THROWS_AS(analytic::p_step_ppc(kBenchA2, 2), std::invalid_argument);
    CHECK_THROWS_AS(analytic::p_step_ppc({0.5, 0.5, 0.5}, 1), std::invalid_argument);
}

TEST_CASE("p_total_ppc: endpoints and the closed-form route") {
    CHECK(close(analytic::p_total_ppc(kBenchA2), 0.03228, 1e-4));
    CHECK(close(analytic::p_total_ppc(kBenchA2), 0.032281205164992825, 1e-15));
    CHECK(close(analytic::p_total_ppc_closed_form(kBenchA2), 0.032281205164992825, 1e-15));

    CHECK(close(analytic::p_total_ppc({0.36, 0.64}), 0.4608));
    CHECK(close(analytic::p_total_ppc({0.25, 0.25, 0.25, 0.25}), 0.125));

    // the product of per-step factors telescopes to the closed form
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto a2 = random_a2(n, gen);
        CHECK(close(analytic::p_total_ppc(a2), analytic::p_total_ppc_closed_form(a2)));
    }
}

TEST_CASE("p_total_ppc: symmetric in the non-pivot coefficients") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(gen() % 4);
        auto a2 = random_a2(n, gen);
        const double reference = analytic::p_total_ppc(a2);
        // shuffle every slot except the pivot (slot 2, index 1)
        std::vector<double> rest;
        for (std::size_t i = 0; i < a2.size(); ++i) {
            if (i != 1) rest.push_back(a2[i]);
        }
        std::shuffle(rest.begin(), rest.end(), gen);
        std::size_t j = 0;
        for (std::size_t i = 0; i < a2.size(); ++i) {
            if (i != 1) a2[i] = rest[j++];
        }
        CHECK(close(analytic::p_total_ppc(a2), reference));
    }
}

TEST_CASE("p_total_ppc: nonincreasing as the pivot value grows") {
    // hold the other coefficients' multiset fixed, grow the pivot share
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 50; ++trial) {
        auto sorted = random_a2(4, gen);
        std::sort(sorted.begin(), sorted.end());
        double previous = 1.0;
        for (std::size_t pick = 0; pick < sorted.size(); ++pick) {
            std::vector<double> arranged;
            arranged.push_back(0.0);  // placeholder for slot 1
            arranged.push_back(sorted[pick]);
            std::vector<double> rest;
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                if (i != pick) rest.push_back(sorted[i]);
            }
            arranged[0] = rest[0];
            arranged.push_back(rest[1]);
            arranged.push_back(rest[2]);
            const double total = analytic::p_total_ppc(arranged);
            if (pick > 0) CHECK(total <= previous + 1e-15);
            previous = total;
        }
    }
}

TEST_CASE("p_step_cpc: first iteration equals the single-round factor") {
    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto a2 = random_a2(n, gen);
        for (int k = 1; k <= n; ++k) {
            if (k == 2) continue;
            CHECK(close(analytic::p_step_cpc(a2, k, 1), analytic::p_step_ppc(a2, k)));
        }
    }
}

TEST_CASE("p_step_cpc: benchmark second iteration and uniform geometric decay") {
    // frozen from the independent enumeration of the benchmark instance
    CHECK(close(analytic::p_step_cpc(kBenchA2, 1, 2), 0.25));

    // equal coefficients make every retry a fair coin: P^k_m = 2^-m
    for (int n : {2, 4, 6}) {
        const std::vector<double> uniform(static_cast<std::size_t>(n), 1.0 / n);
        for (int k = 1; k <= n; ++k) {
            if (k == 2) continue;
            for (int m = 1; m <= 6; ++m) {
                CHECK(close(analytic::p_step_cpc(uniform, k, m), std::ldexp(1.0, -m)));
            }
        }
    }
}

TEST_CASE("p_step_cpc: agrees with the brute-force oracle everywhere") {
    std::mt19937_64 gen(47);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto a2 = random_a2(n, gen);
        oracle::Amplitudes alphas(a2.size());
        for (std::size_t i = 0; i < a2.size(); ++i) alphas[i] = std::sqrt(a2[i]);
        const auto expected = oracle::run(alphas, 4);
        for (const auto& [km, p] : expected.per_step_m) {
            CHECK(close(analytic::p_step_cpc(a2, km.first, km.second), p));
        }
    }
}

TEST_CASE("p_step_cpc: extreme iterations underflow to zero, never NaN") {
    const std::vector<double> a2{0.36, 0.64};
    for (int m : {20, 35, 50, 64}) {
        const double p = analytic::p_step_cpc(a2, 1, m);
        CHECK(std::isfinite(p));
        CHECK(p >= 0.0);
    }
    CHECK(analytic::p_step_cpc(a2, 1, 64) == 0.0);
}

TEST_CASE("p_total_cpc: table invariants and endpoints") {
    const auto table = analytic::p_total_cpc(kBenchA2, 8);
    CHECK(close(table.total, 0.28575, 1e-3));
    CHECK(close(table.total, 0.28575439453125, 1e-15));
    CHECK(table.steps == std::vector<int>{1, 3, 4, 5});

    double product = 1.0;
    for (int k : table.steps) {
        double sum = 0.0;
        for (double p : table.per_step_per_m.at(k)) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            sum += p;
        }
        CHECK(close(table.per_step_sum.at(k), sum));
        product *= sum;
    }
    CHECK(close(table.total, product));

    // max_m = 1 equals the single-round pipeline
    std::mt19937_64 gen(53);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto a2 = random_a2(n, gen);
        CHECK(close(analytic::p_total_cpc(a2, 1).total, analytic::p_total_ppc(a2)));
    }
}

TEST_CASE("p_total_cpc: monotone in the iteration limit with bounded row sums") {
    std::mt19937_64 gen(59);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto a2 = random_a2(n, gen);
        double previous_total = 0.0;
        for (int max_m = 1; max_m <= 12; ++max_m) {
            const auto table = analytic::p_total_cpc(a2, max_m);
            CHECK(table.total >= previous_total - 1e-15);
            previous_total = table.total;
            for (int k : table.steps) CHECK(table.per_step_sum.at(k) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("pivot handling mirrors the role swap") {
    // evaluating with pivot = 4 must equal evaluating the swapped vector
    const std::vector<double> swapped{0.25, 0.09, 0.25, 0.25, 0.16};
    CHECK(close(analytic::p_total_ppc(kBenchA2, 4), analytic::p_total_ppc(swapped, 2)));
    CHECK(close(analytic::p_step_cpc(kBenchA2, 3, 2, 4), analytic::p_step_cpc(swapped, 3, 2, 2)));
}
