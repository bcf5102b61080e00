#pragma once

#include <string>

#include <json.hpp>

#include "wconc/analytic.hpp"
#include "wconc/montecarlo.hpp"
#include "wconc/protocol.hpp"
#include "wconc/verify.hpp"

namespace wconc {

/// Shortest round-trip decimal representation (byte-stable across runs).
std::string format_double(double value);

/// Debug form of a state:
///   {"modes": [...], "terms": [{"amp": [re, im], "occ": {"a1": ["V"], ...}}]}
/// with terms in canonical order and only occupied modes listed.
nlohmann::json to_json(const PureState& state);

nlohmann::json to_json(const WCoefficients& coeffs);
nlohmann::json to_json(const StepRecord& record);
nlohmann::json to_json(const ConcentrationReport& report);
nlohmann::json to_json(const Estimate& estimate);
nlohmann::json to_json(const VerifyReport& report);

/// Sweep table as CSV, header "k,m,p_step,p_step_cumsum,p_total_cumprod",
/// rows ordered by (k, m). The cumulative-product column at iteration m is
/// the total the protocol would reach if every step stopped at m.
std::string sweep_csv(const analytic::ProbabilityTable& table);

nlohmann::json sweep_json(const analytic::ProbabilityTable& table);

}  // namespace wconc
