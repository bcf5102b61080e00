#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wconc {

using Complex = std::complex<double>;

/// Absolute tolerance used for floating-point comparisons unless a caller
/// overrides it.
inline constexpr double kDefaultTol = 1e-12;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

const char* to_string(Polarization p);

/// Spatial-mode label ("a1", "b3", "anc", ...). Nonempty, unique within a
/// registry.
using ModeId = std::string;

/// Ordered, immutable registry of the spatial modes a state is defined over.
/// Shared by value-semantic states via shared_ptr; never mutated after
/// construction.
class ModeRegistry {
  public:
    /// Packed-occupancy terms hold one nibble per mode.
    static constexpr std::size_t kMaxModes = 16;

    explicit ModeRegistry(std::vector<ModeId> names);

    std::size_t size() const { return names_.size(); }
    const ModeId& name(std::size_t idx) const { return names_.at(idx); }
    const std::vector<ModeId>& names() const { return names_; }

    std::optional<std::size_t> find(std::string_view mode) const;
    /// Throws std::invalid_argument when the mode is absent.
    std::size_t index_of(std::string_view mode) const;

    bool operator==(const ModeRegistry& other) const { return names_ == other.names_; }

  private:
    std::vector<ModeId> names_;
};

using ModeRegistryPtr = std::shared_ptr<const ModeRegistry>;

ModeRegistryPtr make_registry(std::vector<ModeId> names);

/// Photon content of one basis term: a multiset of polarizations per mode,
/// at most two photons per mode (bunching behind a PBS is the only source of
/// doubly occupied modes).
///
/// Packed four bits per mode -- two bits of |H> count, two bits of |V>
/// count -- with mode 0 in the most significant nibble so that the raw
/// integer order coincides with lexicographic order over the registry.
class Occupancy {
  public:
    Occupancy() = default;

    int h_count(std::size_t mode) const { return static_cast<int>((bits_ >> shift(mode)) & 0x3u); }
    int v_count(std::size_t mode) const {
        return static_cast<int>((bits_ >> (shift(mode) + 2)) & 0x3u);
    }
    int photons_in(std::size_t mode) const { return h_count(mode) + v_count(mode); }
    int total_photons(std::size_t mode_count) const;

    /// Returns a copy with one extra photon; throws std::logic_error if the
    /// mode already holds two photons.
    Occupancy with_photon(std::size_t mode, Polarization p) const;
    /// Returns a copy with one matching photon removed; throws if absent.
    Occupancy without_photon(std::size_t mode, Polarization p) const;

    /// Occupancy re-expressed in a registry where this registry's modes got
    /// offset new indices (tensor embedding).
    Occupancy shifted_right(std::size_t offset) const;
    /// Union with an occupancy over disjoint mode slots.
    Occupancy union_disjoint(const Occupancy& other) const;
    /// Occupancy with the given mode's slot deleted (mode must be empty).
    Occupancy erased(std::size_t mode) const;

    std::uint64_t key() const { return bits_; }

    friend bool operator==(const Occupancy&, const Occupancy&) = default;
    friend auto operator<=>(const Occupancy& a, const Occupancy& b) { return a.bits_ <=> b.bits_; }

  private:
    static std::size_t shift(std::size_t mode) { return 4 * (ModeRegistry::kMaxModes - 1 - mode); }

    std::uint64_t bits_ = 0;
};

/// One ket in a sparse superposition.
struct BasisTerm {
    Complex amplitude;
    Occupancy occupancy;
};

/// Sparse superposition of basis terms over a fixed mode registry.
///
/// Invariants maintained by every operation:
///  - terms are sorted by occupancy and pairwise distinct (canonical form);
///  - every term carries the same total photon number;
///  - immutable after construction (operations return new states).
class PureState {
  public:
    PureState() = default;

    /// Canonicalizes: sorts terms, merges equal occupancies, drops exact
    /// zeros, validates photon-number uniformity.
    PureState(ModeRegistryPtr modes, std::vector<BasisTerm> terms);

    static PureState zero(ModeRegistryPtr modes) { return PureState(std::move(modes), {}); }

    const ModeRegistry& modes() const { return *modes_; }
    const ModeRegistryPtr& modes_ptr() const { return modes_; }
    std::span<const BasisTerm> terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    /// Photons per term (uniform across terms); 0 for the zero state.
    int photon_count() const { return photon_count_; }

    double squared_norm() const;
    Complex amplitude_of(const Occupancy& occ) const;

  private:
    ModeRegistryPtr modes_ = make_registry({});
    std::vector<BasisTerm> terms_;
    int photon_count_ = 0;
};

/// The coefficient vector (alpha_1 ... alpha_n) of an n-photon less-entangled
/// W state. Valid iff n >= 2, the squared moduli sum to 1 within `tol`, and
/// no coefficient vanishes (a zero entry makes ancilla preparation
/// degenerate, so it is rejected at construction).
class WCoefficients {
  public:
    WCoefficients(std::vector<Complex> alphas, double tol = kDefaultTol);

    static WCoefficients from_reals(const std::vector<double>& alphas, double tol = kDefaultTol);

    int n() const { return static_cast<int>(alphas_.size()); }
    const std::vector<Complex>& alphas() const { return alphas_; }
    /// alpha_i for 1-based photon index i.
    Complex alpha(int i) const { return alphas_.at(static_cast<std::size_t>(i - 1)); }
    /// Squared moduli |alpha_i|^2, the only thing the closed-form
    /// probabilities depend on.
    std::vector<double> alphas2() const;

  private:
    std::vector<Complex> alphas_;
};

// ---------------------------------------------------------------------------
// State algebra
// ---------------------------------------------------------------------------

/// N-term W superposition: term i has a V photon in modes[i] and an H photon
/// in every other mode, with amplitude alpha_i.
PureState w_state(const WCoefficients& coeffs, const std::vector<ModeId>& modes);

/// Product state over the concatenated registries; mode names must be
/// disjoint.
PureState tensor(const PureState& a, const PureState& b);

struct Normalized {
    PureState state;
    double norm;
};

/// Rescales to unit norm; returns the original norm. Throws on the zero
/// state.
Normalized normalize(const PureState& s);

struct Projection {
    PureState state;
    double probability;
};

/// Keeps the terms selected by `keep`, renormalizes, and reports the squared
/// weight of the kept component. An empty projection yields the zero state
/// with probability 0.
Projection project(const PureState& s, const std::function<bool(const Occupancy&)>& keep);

/// <a|b>; conjugate-linear in `a`. Registries and photon counts must match.
Complex inner_product(const PureState& a, const PureState& b);

/// |<W_max|s>|^2 against the maximally entangled W state (all coefficients
/// 1/sqrt(N)) over the given modes, which must be exactly s's registry.
double max_w_fidelity(const PureState& s, const std::vector<ModeId>& w_modes);

}  // namespace wconc
