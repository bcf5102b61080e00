#pragma once

#include "wconc/qstate.hpp"

namespace wconc {

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

/// Outcome label of a parity measurement. The odd branch only carries the
/// unresolved +-2theta tag of the coherent probe; no numeric phase ever
/// enters an amplitude.
struct ParityOutcome {
    Parity kind = Parity::Even;

    bool is_even() const { return kind == Parity::Even; }
    /// "0" for even, "+-2theta" for odd (the two odd shifts are
    /// indistinguishable by homodyne detection).
    const char* probe_shift() const { return is_even() ? "0" : "+-2theta"; }
};

enum class PmOutcome : std::uint8_t { Plus = 0, Minus = 1 };

const char* to_string(PmOutcome o);
const char* to_string(Parity p);

/// Parameters of the cross-Kerr probe behind the CPC gate. The coupling
/// phase never enters any amplitude or probability; it is kept as
/// documentation of the physical realization only.
struct CpcModel {
    double theta = 0.01;  // radians, > 0
};

/// One-photon state c_h|H> + c_v|V> in a fresh single-mode registry.
/// Requires |c_h|^2 + |c_v|^2 = 1.
PureState single_photon(Complex c_h, Complex c_v, const ModeId& mode, double tol = kDefaultTol);

/// Polarizing beam splitter: transmits H, reflects V.
///   in1: H -> out1, V -> out2;   in2: H -> out2, V -> out1.
/// Output modes may coincide with the inputs (in-place routing) or be fresh
/// names appended to the registry. Bunched outputs are permitted.
PureState pbs(const PureState& s, const ModeId& in1, const ModeId& in2, const ModeId& out1,
              const ModeId& out2);

struct PostselectResult {
    PureState even;  // renormalized; zero state when p_even == 0
    double p_even;
};

/// Coincidence post-selection behind a PBS: keeps exactly the terms with one
/// photon in each output port. Destructive by construction -- the odd
/// component is not returned, matching the photon-destroying detection of
/// the linear-optics gate.
PostselectResult ppc_postselect(const PureState& s, const ModeId& out1, const ModeId& out2);

struct ParityBranches {
    PureState even;
    double p_even;
    PureState odd;
    double p_odd;
};

/// QND complete parity check on two singly-occupied modes: partitions terms
/// into even ({HH, VV}) and odd ({HV, VH}) polarization parity, renormalizes
/// each branch with its Born probability, and keeps all photons in place in
/// both branches. The odd branch is the coherent sum over the two
/// indistinguishable probe shifts.
ParityBranches cpc_measure(const PureState& s, const ModeId& m1, const ModeId& m2,
                           const CpcModel& model = {});

struct PmBranches {
    PureState plus;
    double p_plus;
    PureState minus;
    double p_minus;
};

/// Measures the single photon in `mode` in the |+->=(|H>+-|V>)/sqrt(2) basis
/// and removes the mode from the registry. Branch probabilities sum to 1.
PmBranches measure_pm(const PureState& s, const ModeId& mode);

/// Local phase rotation: multiplies the amplitude of every term holding a V
/// photon in `mode` by -1. Unitary involution.
PureState phase_flip_v(const PureState& s, const ModeId& mode);

}  // namespace wconc
