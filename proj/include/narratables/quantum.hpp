#pragma once

// Spin-1/2 many-body states over a fixed global slot ordering.
//
// Basis index bit (n-1-s) holds slot s (slot 0 is most significant); bit value
// 0 is |+>, 1 is |->. For two slots the basis order is |++>, |+->, |-+>, |-->.

#include "narratables/error.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace narratables::quantum {

using Complex = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using Matrix4c = Eigen::Matrix4cd;
using SlotPair = std::pair<std::size_t, std::size_t>;

inline constexpr std::size_t kMaxSlots = 12;
inline constexpr double kConstructionTolerance = 1e-12;
inline constexpr double kComparisonTolerance = 1e-10;

class SpinState {
public:
    SpinState(std::size_t n_slots, Amplitudes amplitudes) : n_slots_(n_slots), amplitudes_(std::move(amplitudes)) {
        check_slot_count(n_slots_);
        if (amplitudes_.size() != static_cast<Eigen::Index>(std::size_t{1} << n_slots_))
            fail(ErrorKind::DimensionMismatch, std::to_string(n_slots_) + " slots need " +
                                                   std::to_string(std::size_t{1} << n_slots_) + " amplitudes, got " +
                                                   std::to_string(amplitudes_.size()));
        if (std::abs(amplitudes_.norm() - 1.0) > kConstructionTolerance)
            fail(ErrorKind::InvalidArgument, "state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static SpinState normalized(std::size_t n_slots, Amplitudes amplitudes) {
        const double norm = amplitudes.norm();
        if (norm == 0.0) fail(ErrorKind::InvalidArgument, "zero amplitude vector cannot be normalized");
        amplitudes /= norm;
        return SpinState(n_slots, std::move(amplitudes));
    }

    std::size_t n_slots() const { return n_slots_; }
    std::size_t dimension() const { return std::size_t{1} << n_slots_; }
    const Amplitudes& amplitudes() const { return amplitudes_; }

    static void check_slot_count(std::size_t n) {
        if (n < 1) fail(ErrorKind::InvalidArgument, "a spin state needs at least one slot");
        if (n > kMaxSlots)
            fail(ErrorKind::DimensionCapExceeded,
                 std::to_string(n) + " slots exceeds the cap of " + std::to_string(kMaxSlots));
    }

    friend bool operator==(const SpinState& a, const SpinState& b) {
        return a.n_slots_ == b.n_slots_ && a.amplitudes_ == b.amplitudes_;
    }

private:
    std::size_t n_slots_;
    Amplitudes amplitudes_;
};

inline std::size_t slot_bit(std::size_t n_slots, std::size_t slot) { return n_slots - 1 - slot; }

/// Ket label such as "+-+-", slot 0 first.
inline std::string basis_label(std::size_t n_slots, std::size_t index) {
    std::string label(n_slots, '+');
    for (std::size_t s = 0; s < n_slots; ++s)
        if ((index >> slot_bit(n_slots, s)) & 1U) label[s] = '-';
    return label;
}

/// Computational basis state from a label like "+-".
inline SpinState basis_state(const std::string& label) {
    const std::size_t n = label.size();
    SpinState::check_slot_count(n);
    std::size_t index = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] == '-') index |= std::size_t{1} << slot_bit(n, s);
        else if (label[s] != '+') fail(ErrorKind::InvalidArgument, "basis labels are '+' or '-', got '" + label + "'");
    }
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
    a(static_cast<Eigen::Index>(index)) = 1.0;
    return SpinState(n, std::move(a));
}

class TwoSlotUnitary {
public:
    TwoSlotUnitary() : matrix_(Matrix4c::Identity()) {}

    explicit TwoSlotUnitary(Matrix4c matrix) : matrix_(std::move(matrix)) {
        const double defect = (matrix_.adjoint() * matrix_ - Matrix4c::Identity()).cwiseAbs().maxCoeff();
        if (defect > kConstructionTolerance)
            fail(ErrorKind::NonUnitary, "U^dagger U deviates from identity by " + std::to_string(defect));
    }

    static TwoSlotUnitary identity() { return {}; }

    const Matrix4c& matrix() const { return matrix_; }

    /// The same map with its two slots listed in the opposite order.
    TwoSlotUnitary reversed() const {
        Matrix4c s = Matrix4c::Zero();
        s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
        TwoSlotUnitary r;
        r.matrix_ = s * matrix_ * s;
        return r;
    }

    bool is_identity() const { return matrix_ == Matrix4c::Identity(); }

private:
    Matrix4c matrix_;
};

/// |++> -> |++>, |+-> -> |-+>, |-+> -> |+->, |--> -> |-->
inline TwoSlotUnitary swap_unitary() {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0;
    m(2, 1) = 1.0;
    m(1, 2) = 1.0;
    m(3, 3) = 1.0;
    return TwoSlotUnitary(m);
}

struct PairingSpec {
    std::vector<SlotPair> pairs;
    /// Explicit (amplitude of |+>, amplitude of |->) for slots outside every pair.
    std::map<std::size_t, std::array<Complex, 2>> singles;
};

/// Product of singlets (|+-> - |-+>)/sqrt2 on each ordered pair, first-listed
/// slot carrying the first label, with explicit single-slot states elsewhere.
inline SpinState singlet_product(std::size_t n_slots, const PairingSpec& pairing) {
    SpinState::check_slot_count(n_slots);
    std::vector<int> owner(n_slots, 0);
    auto claim = [&](std::size_t slot) {
        if (slot >= n_slots)
            fail(ErrorKind::InvalidPairing, "slot " + std::to_string(slot) + " out of range for " +
                                                std::to_string(n_slots) + " slots");
        if (owner[slot]++) fail(ErrorKind::InvalidPairing, "slot " + std::to_string(slot) + " appears twice");
    };
    for (const auto& [a, b] : pairing.pairs) {
        claim(a);
        claim(b);
    }
    for (const auto& [slot, amps] : pairing.singles) {
        claim(slot);
        if (std::norm(amps[0]) + std::norm(amps[1]) == 0.0)
            fail(ErrorKind::InvalidPairing, "single-slot state for slot " + std::to_string(slot) + " is zero");
    }
    for (std::size_t s = 0; s < n_slots; ++s)
        if (!owner[s]) fail(ErrorKind::InvalidPairing, "slot " + std::to_string(s) + " has no pair or explicit state");

    const std::size_t dim = std::size_t{1} << n_slots;
    Amplitudes amps(static_cast<Eigen::Index>(dim));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t index = 0; index < dim; ++index) {
        Complex value = 1.0;
        for (const auto& [a, b] : pairing.pairs) {
            const bool minus_a = (index >> slot_bit(n_slots, a)) & 1U;
            const bool minus_b = (index >> slot_bit(n_slots, b)) & 1U;
            if (minus_a == minus_b) {
                value = 0.0;
                break;
            }
            value *= minus_a ? -inv_sqrt2 : inv_sqrt2;
        }
        if (value != 0.0) {
            for (const auto& [slot, single] : pairing.singles) {
                const double norm = std::sqrt(std::norm(single[0]) + std::norm(single[1]));
                value *= single[(index >> slot_bit(n_slots, slot)) & 1U] / norm;
            }
        }
        amps(static_cast<Eigen::Index>(index)) = value;
    }
    return SpinState(n_slots, std::move(amps));
}

inline SpinState singlet_product(std::size_t n_slots, std::vector<SlotPair> pairs) {
    return singlet_product(n_slots, PairingSpec{std::move(pairs), {}});
}

/// U on `pair` (first slot = first tensor factor), identity on every other slot.
inline SpinState apply_contact(const SpinState& state, const TwoSlotUnitary& u, SlotPair pair) {
    const std::size_t n = state.n_slots();
    const auto [a, b] = pair;
    if (a >= n || b >= n)
        fail(ErrorKind::SlotOutOfRange, "pair (" + std::to_string(a) + ", " + std::to_string(b) + ") on " +
                                            std::to_string(n) + " slots");
    if (a == b) fail(ErrorKind::EqualSlots, "contact on slot " + std::to_string(a) + " with itself");

    const std::size_t bit_a = std::size_t{1} << slot_bit(n, a);
    const std::size_t bit_b = std::size_t{1} << slot_bit(n, b);
    const Amplitudes& in = state.amplitudes();
    Amplitudes out(in.size());
    const Matrix4c& m = u.matrix();
    for (std::size_t base = 0; base < state.dimension(); ++base) {
        if (base & (bit_a | bit_b)) continue;
        const std::array<std::size_t, 4> idx{base, base | bit_b, base | bit_a, base | bit_a | bit_b};
        for (int r = 0; r < 4; ++r) {
            Complex acc = 0.0;
            for (int c = 0; c < 4; ++c) acc += m(r, c) * in(static_cast<Eigen::Index>(idx[c]));
            out(static_cast<Eigen::Index>(idx[r])) = acc;
        }
    }
    // Rounding drift only; exact maps such as the identity stay bit-exact.
    if (std::abs(out.norm() - 1.0) > 1e-14) return SpinState::normalized(n, std::move(out));
    return SpinState(n, std::move(out));
}

struct ContactAction {
    TwoSlotUnitary unitary;
    SlotPair pair;
};

/// Simultaneous contacts on mutually disjoint pairs.
inline SpinState apply_group(const SpinState& state, const std::vector<ContactAction>& actions) {
    std::set<std::size_t> used;
    for (const auto& action : actions) {
        if (action.pair.first == action.pair.second) continue;  // rejected by apply_contact
        for (std::size_t slot : {action.pair.first, action.pair.second}) {
            if (!used.insert(slot).second)
                fail(ErrorKind::OverlappingPairs, "slot " + std::to_string(slot) + " appears in two simultaneous contacts");
        }
    }
    SpinState result = state;
    for (const auto& action : actions) result = apply_contact(result, action.unitary, action.pair);
    return result;
}

/// <a|b>
inline Complex overlap(const SpinState& a, const SpinState& b) {
    if (a.n_slots() != b.n_slots())
        fail(ErrorKind::DimensionMismatch, "overlap of " + std::to_string(a.n_slots()) + "-slot and " +
                                               std::to_string(b.n_slots()) + "-slot states");
    return a.amplitudes().dot(b.amplitudes());
}

inline bool equal_up_to_phase(const SpinState& a, const SpinState& b, double tolerance = kComparisonTolerance) {
    return std::abs(std::abs(overlap(a, b)) - 1.0) <= tolerance;
}

/// (|Jx psi|, |Jy psi|, |Jz psi|) with J_k the total spin sum_s sigma_k / 2.
inline std::array<double, 3> angular_momentum_norms(const SpinState& state) {
    const std::size_t n = state.n_slots();
    const Amplitudes& in = state.amplitudes();
    std::array<Amplitudes, 3> out;
    for (auto& v : out) v = Amplitudes::Zero(in.size());
    const Complex i_unit(0.0, 1.0);
    for (std::size_t index = 0; index < state.dimension(); ++index) {
        const Complex amp = in(static_cast<Eigen::Index>(index));
        if (amp == 0.0) continue;
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t bit = std::size_t{1} << slot_bit(n, s);
            const bool minus = index & bit;
            const auto flipped = static_cast<Eigen::Index>(index ^ bit);
            out[0](flipped) += 0.5 * amp;
            // sigma_y |+> = i |->, sigma_y |-> = -i |+>
            out[1](flipped) += (minus ? -i_unit : i_unit) * 0.5 * amp;
            out[2](static_cast<Eigen::Index>(index)) += (minus ? -0.5 : 0.5) * amp;
        }
    }
    return {out[0].norm(), out[1].norm(), out[2].norm()};
}

} // namespace narratables::quantum
