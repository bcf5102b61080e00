#include "wconc/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wconc {

const char* to_string(PmOutcome o) { return o == PmOutcome::Plus ? "+" : "-"; }
const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

PureState single_photon(Complex c_h, Complex c_v, const ModeId& mode, double tol) {
    const double sum2 = std::norm(c_h) + std::norm(c_v);
    if (std::abs(sum2 - 1.0) > tol) {
        throw std::invalid_argument("single_photon: |c_h|^2 + |c_v|^2 must be 1");
    }
    auto registry = make_registry({mode});
    std::vector<BasisTerm> terms;
    if (c_h != Complex{0.0, 0.0}) {
        terms.push_back({c_h, Occupancy{}.with_photon(0, Polarization::H)});
    }
    if (c_v != Complex{0.0, 0.0}) {
        terms.push_back({c_v, Occupancy{}.with_photon(0, Polarization::V)});
    }
    return PureState(std::move(registry), std::move(terms));
}

PureState pbs(const PureState& s, const ModeId& in1, const ModeId& in2, const ModeId& out1,
              const ModeId& out2) {
    if (out1 == out2) throw std::invalid_argument("pbs: output ports must differ");
    const std::size_t i1 = s.modes().index_of(in1);
    const std::size_t i2 = s.modes().index_of(in2);
    if (i1 == i2) throw std::invalid_argument("pbs: input ports must differ");

    // Outputs either reuse input modes or are appended as fresh modes.
    std::vector<ModeId> names = s.modes().names();
    auto resolve_out = [&](const ModeId& out) -> std::size_t {
        if (auto idx = s.modes().find(out)) {
            if (*idx != i1 && *idx != i2) {
                throw std::invalid_argument("pbs: output mode " + out +
                                            " already exists and is not an input port");
            }
            return *idx;
        }
        names.push_back(out);
        return names.size() - 1;
    };
    const std::size_t o1 = resolve_out(out1);
    const std::size_t o2 = resolve_out(out2);
    auto registry = make_registry(std::move(names));

    std::vector<BasisTerm> terms;
    terms.reserve(s.term_count());
    for (const auto& t : s.terms()) {
        const int h1 = t.occupancy.h_count(i1), v1 = t.occupancy.v_count(i1);
        const int h2 = t.occupancy.h_count(i2), v2 = t.occupancy.v_count(i2);
        Occupancy occ = t.occupancy;
        for (int k = 0; k < h1; ++k) occ = occ.without_photon(i1, Polarization::H);
        for (int k = 0; k < v1; ++k) occ = occ.without_photon(i1, Polarization::V);
        for (int k = 0; k < h2; ++k) occ = occ.without_photon(i2, Polarization::H);
        for (int k = 0; k < v2; ++k) occ = occ.without_photon(i2, Polarization::V);
        for (int k = 0; k < h1; ++k) occ = occ.with_photon(o1, Polarization::H);
        for (int k = 0; k < v1; ++k) occ = occ.with_photon(o2, Polarization::V);
        for (int k = 0; k < h2; ++k) occ = occ.with_photon(o2, Polarization::H);
        for (int k = 0; k < v2; ++k) occ = occ.with_photon(o1, Polarization::V);
        terms.push_back({t.amplitude, occ});
    }
    return PureState(std::move(registry), std::move(terms));
}

PostselectResult ppc_postselect(const PureState& s, const ModeId& out1, const ModeId& out2) {
    const std::size_t o1 = s.modes().index_of(out1);
    const std::size_t o2 = s.modes().index_of(out2);
    auto [state, probability] = project(s, [o1, o2](const Occupancy& occ) {
        return occ.photons_in(o1) == 1 && occ.photons_in(o2) == 1;
    });
    return {std::move(state), probability};
}

namespace {

Polarization single_polarization(const Occupancy& occ, std::size_t mode, const char* who) {
    const int h = occ.h_count(mode), v = occ.v_count(mode);
    if (h + v != 1) {
        throw std::invalid_argument(std::string(who) + ": mode must hold exactly one photon");
    }
    return h == 1 ? Polarization::H : Polarization::V;
}

}  // namespace

ParityBranches cpc_measure(const PureState& s, const ModeId& m1, const ModeId& m2,
                           const CpcModel& model) {
    if (!(model.theta > 0.0)) throw std::invalid_argument("cpc_measure: theta must be > 0");
    const std::size_t i1 = s.modes().index_of(m1);
    const std::size_t i2 = s.modes().index_of(m2);
    for (const auto& t : s.terms()) {
        single_polarization(t.occupancy, i1, "cpc_measure");
        single_polarization(t.occupancy, i2, "cpc_measure");
    }
    auto is_even = [i1, i2](const Occupancy& occ) {
        return occ.h_count(i1) == occ.h_count(i2);
    };
    auto [even, p_even] = project(s, is_even);
    auto [odd, p_odd] = project(s, [&](const Occupancy& occ) { return !is_even(occ); });
    return {std::move(even), p_even, std::move(odd), p_odd};
}

PmBranches measure_pm(const PureState& s, const ModeId& mode) {
    const std::size_t idx = s.modes().index_of(mode);
    std::vector<ModeId> names = s.modes().names();
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(idx));
    auto registry = make_registry(std::move(names));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<BasisTerm> plus_terms, minus_terms;
    plus_terms.reserve(s.term_count());
    minus_terms.reserve(s.term_count());
    for (const auto& t : s.terms()) {
        const Polarization pol = single_polarization(t.occupancy, idx, "measure_pm");
        const Occupancy occ = t.occupancy.without_photon(idx, pol).erased(idx);
        plus_terms.push_back({t.amplitude * inv_sqrt2, occ});
        const double sign = pol == Polarization::V ? -1.0 : 1.0;
        minus_terms.push_back({t.amplitude * sign * inv_sqrt2, occ});
    }
    // Terms differing only in the removed mode's polarization merge here;
    // the PureState constructor sums their amplitudes.
    PureState plus_raw(registry, std::move(plus_terms));
    PureState minus_raw(registry, std::move(minus_terms));
    const double p_plus = plus_raw.squared_norm();
    const double p_minus = minus_raw.squared_norm();

    auto rescaled = [&registry](PureState& raw, double weight) {
        if (weight <= 0.0) return PureState::zero(registry);
        const double inv_norm = 1.0 / std::sqrt(weight);
        std::vector<BasisTerm> terms(raw.terms().begin(), raw.terms().end());
        for (auto& t : terms) t.amplitude *= inv_norm;
        return PureState(raw.modes_ptr(), std::move(terms));
    };
    PureState plus = rescaled(plus_raw, p_plus);
    PureState minus = rescaled(minus_raw, p_minus);
    return {std::move(plus), p_plus, std::move(minus), p_minus};
}

PureState phase_flip_v(const PureState& s, const ModeId& mode) {
    const std::size_t idx = s.modes().index_of(mode);
    std::vector<BasisTerm> terms(s.terms().begin(), s.terms().end());
    for (auto& t : terms) {
        // One sign flip per term holding any V content, not one per photon.
        if (t.occupancy.v_count(idx) > 0) t.amplitude = -t.amplitude;
    }
    return PureState(s.modes_ptr(), std::move(terms));
}

}  // namespace wconc
