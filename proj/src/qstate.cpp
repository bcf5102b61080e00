#include "wconc/qstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace wconc {

const char* to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

// ---------------------------------------------------------------------------
// ModeRegistry
// ---------------------------------------------------------------------------

ModeRegistry::ModeRegistry(std::vector<ModeId> names) : names_(std::move(names)) {
    if (names_.size() > kMaxModes) {
        std::ostringstream msg;
        msg << "mode registry holds " << names_.size() << " modes, capacity is " << kMaxModes;
        throw std::invalid_argument(msg.str());
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw std::invalid_argument("mode names must be nonempty");
        for (std::size_t j = 0; j < i; ++j) {
            if (names_[j] == names_[i]) {
                throw std::invalid_argument("duplicate mode name: " + names_[i]);
            }
        }
    }
}

std::optional<std::size_t> ModeRegistry::find(std::string_view mode) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == mode) return i;
    }
    return std::nullopt;
}

std::size_t ModeRegistry::index_of(std::string_view mode) const {
    if (auto idx = find(mode)) return *idx;
    throw std::invalid_argument("unknown mode: " + std::string(mode));
}

ModeRegistryPtr make_registry(std::vector<ModeId> names) {
    // The protocol cycles through a handful of registries; intern recent ones
    // so repeated construction returns the shared instance.
    thread_local std::array<ModeRegistryPtr, 8> cache;
    thread_local std::size_t next = 0;
    for (const auto& entry : cache) {
        if (entry && entry->names() == names) return entry;
    }
    auto ptr = std::make_shared<const ModeRegistry>(std::move(names));
    cache[next] = ptr;
    next = (next + 1) % cache.size();
    return ptr;
}

// ---------------------------------------------------------------------------
// Occupancy
// ---------------------------------------------------------------------------

int Occupancy::total_photons(std::size_t mode_count) const {
    int total = 0;
    for (std::size_t m = 0; m < mode_count; ++m) total += photons_in(m);
    return total;
}

Occupancy Occupancy::with_photon(std::size_t mode, Polarization p) const {
    if (photons_in(mode) >= 2) {
        throw std::logic_error("mode already holds two photons");
    }
    Occupancy out = *this;
    const std::size_t sh = shift(mode) + (p == Polarization::V ? 2 : 0);
    out.bits_ += std::uint64_t{1} << sh;
    return out;
}

Occupancy Occupancy::without_photon(std::size_t mode, Polarization p) const {
    const int have = p == Polarization::H ? h_count(mode) : v_count(mode);
    if (have == 0) throw std::logic_error("no such photon to remove");
    Occupancy out = *this;
    const std::size_t sh = shift(mode) + (p == Polarization::V ? 2 : 0);
    out.bits_ -= std::uint64_t{1} << sh;
    return out;
}

Occupancy Occupancy::shifted_right(std::size_t offset) const {
    Occupancy out;
    out.bits_ = bits_ >> (4 * offset);
    return out;
}

Occupancy Occupancy::union_disjoint(const Occupancy& other) const {
    if (bits_ & other.bits_) throw std::logic_error("occupancies overlap");
    Occupancy out;
    out.bits_ = bits_ | other.bits_;
    return out;
}

Occupancy Occupancy::erased(std::size_t mode) const {
    if (photons_in(mode) != 0) throw std::logic_error("erasing a non-empty mode");
    const std::size_t sh = shift(mode);
    // Nibbles below `sh` belong to higher-indexed modes; move them up one slot.
    const std::uint64_t below = sh == 0 ? 0 : (std::uint64_t{1} << sh) - 1;
    const std::uint64_t above = ~(below | (std::uint64_t{0xF} << sh));
    Occupancy out;
    out.bits_ = (bits_ & above) | ((bits_ & below) << 4);
    return out;
}

// ---------------------------------------------------------------------------
// PureState
// ---------------------------------------------------------------------------

PureState::PureState(ModeRegistryPtr modes, std::vector<BasisTerm> terms)
    : modes_(std::move(modes)), terms_(std::move(terms)) {
    if (!modes_) throw std::invalid_argument("null mode registry");
    bool ascending = true;
    for (std::size_t i = 1; i < terms_.size(); ++i) {
        if (!(terms_[i - 1].occupancy < terms_[i].occupancy)) {
            ascending = false;
            break;
        }
    }
    if (!ascending) {
        std::sort(terms_.begin(), terms_.end(), [](const BasisTerm& a, const BasisTerm& b) {
            return a.occupancy < b.occupancy;
        });
        // Merge duplicate occupancies in place.
        std::size_t w = 0;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (w > 0 && terms_[w - 1].occupancy == terms_[i].occupancy) {
                terms_[w - 1].amplitude += terms_[i].amplitude;
            } else {
                terms_[w++] = terms_[i];
            }
        }
        terms_.resize(w);
    }
    std::erase_if(terms_, [](const BasisTerm& t) { return t.amplitude == Complex{0.0, 0.0}; });

    const std::size_t mode_count = modes_->size();
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const int count = terms_[i].occupancy.total_photons(mode_count);
        if (i == 0) {
            photon_count_ = count;
        } else if (count != photon_count_) {
            throw std::invalid_argument("terms with different total photon numbers");
        }
    }
}

double PureState::squared_norm() const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += std::norm(t.amplitude);
    return sum;
}

Complex PureState::amplitude_of(const Occupancy& occ) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), occ,
        [](const BasisTerm& t, const Occupancy& o) { return t.occupancy < o; });
    if (it != terms_.end() && it->occupancy == occ) return it->amplitude;
    return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// WCoefficients
// ---------------------------------------------------------------------------

WCoefficients::WCoefficients(std::vector<Complex> alphas, double tol) : alphas_(std::move(alphas)) {
    if (alphas_.size() < 2) {
        throw std::invalid_argument("W coefficients need n >= 2 entries");
    }
    double sum2 = 0.0;
    for (const auto& a : alphas_) {
        const double mod2 = std::norm(a);
        if (mod2 <= tol * tol) {
            throw std::invalid_argument("zero W coefficient (|alpha_i| must be > 0)");
        }
        sum2 += mod2;
    }
    if (std::abs(sum2 - 1.0) > tol) {
        std::ostringstream msg;
        msg << "squared moduli of W coefficients must sum to 1 (got " << sum2 << ")";
        throw std::invalid_argument(msg.str());
    }
}

WCoefficients WCoefficients::from_reals(const std::vector<double>& alphas, double tol) {
    std::vector<Complex> c(alphas.begin(), alphas.end());
    return WCoefficients(std::move(c), tol);
}

std::vector<double> WCoefficients::alphas2() const {
    std::vector<double> out(alphas_.size());
    for (std::size_t i = 0; i < alphas_.size(); ++i) out[i] = std::norm(alphas_[i]);
    return out;
}

// ---------------------------------------------------------------------------
// State algebra
// ---------------------------------------------------------------------------

PureState w_state(const WCoefficients& coeffs, const std::vector<ModeId>& modes) {
    const auto n = static_cast<std::size_t>(coeffs.n());
    if (modes.size() != n) {
        throw std::invalid_argument("w_state: mode list length does not match coefficient count");
    }
    auto registry = make_registry(modes);
    std::vector<BasisTerm> terms;
    terms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Occupancy occ;
        for (std::size_t m = 0; m < n; ++m) {
            occ = occ.with_photon(m, m == i ? Polarization::V : Polarization::H);
        }
        terms.push_back({coeffs.alphas()[i], occ});
    }
    return PureState(std::move(registry), std::move(terms));
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<ModeId> names = a.modes().names();
    for (const auto& name : b.modes().names()) {
        if (a.modes().find(name)) {
            throw std::invalid_argument("tensor: overlapping mode name: " + name);
        }
        names.push_back(name);
    }
    auto registry = make_registry(std::move(names));
    const std::size_t offset = a.modes().size();

    std::vector<BasisTerm> terms;
    terms.reserve(a.term_count() * b.term_count());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            // a's nibbles already sit at their final positions; b's shift down.
            const Occupancy occ = ta.occupancy.union_disjoint(tb.occupancy.shifted_right(offset));
            terms.push_back({ta.amplitude * tb.amplitude, occ});
        }
    }
    return PureState(std::move(registry), std::move(terms));
}

Normalized normalize(const PureState& s) {
    const double norm2 = s.squared_norm();
    if (norm2 <= 0.0) throw std::domain_error("normalize: zero state");
    const double norm = std::sqrt(norm2);
    std::vector<BasisTerm> terms(s.terms().begin(), s.terms().end());
    for (auto& t : terms) t.amplitude /= norm;
    return {PureState(s.modes_ptr(), std::move(terms)), norm};
}

Projection project(const PureState& s, const std::function<bool(const Occupancy&)>& keep) {
    std::vector<BasisTerm> kept;
    double weight = 0.0;
    for (const auto& t : s.terms()) {
        if (keep(t.occupancy)) {
            kept.push_back(t);
            weight += std::norm(t.amplitude);
        }
    }
    if (kept.empty() || weight <= 0.0) {
        return {PureState::zero(s.modes_ptr()), 0.0};
    }
    const double norm = std::sqrt(weight);
    for (auto& t : kept) t.amplitude /= norm;
    return {PureState(s.modes_ptr(), std::move(kept)), weight};
}

Complex inner_product(const PureState& a, const PureState& b) {
    if (!(a.modes() == b.modes())) {
        throw std::invalid_argument("inner_product: mode registries differ");
    }
    if (!a.is_zero() && !b.is_zero() && a.photon_count() != b.photon_count()) {
        throw std::invalid_argument("inner_product: photon counts differ");
    }
    // Both term lists are sorted by occupancy: merge-join.
    Complex sum{0.0, 0.0};
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->occupancy < ib->occupancy) {
            ++ia;
        } else if (ib->occupancy < ia->occupancy) {
            ++ib;
        } else {
            sum += std::conj(ia->amplitude) * ib->amplitude;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

double max_w_fidelity(const PureState& s, const std::vector<ModeId>& w_modes) {
    const auto n = w_modes.size();
    if (n < 2) throw std::invalid_argument("max_w_fidelity: need at least two modes");
    if (s.modes().names() != w_modes) {
        throw std::invalid_argument("max_w_fidelity: state is not over exactly the given modes");
    }
    if (s.photon_count() != static_cast<int>(n)) {
        throw std::invalid_argument("max_w_fidelity: photon-count mismatch");
    }
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    WCoefficients uniform(std::vector<Complex>(n, Complex{c, 0.0}));
    const PureState w_max = w_state(uniform, w_modes);
    return std::norm(inner_product(w_max, s));
}

}  // namespace wconc
