#pragma once

// Delta-function structure of momentum-space interaction kernels, checked
// against the cluster decomposition requirement: the only momentum delta
// function allowed is overall conservation.
//
// Each delta row is a rational coefficient vector over the kernel's momentum
// slots, columns ordered outgoing first, then incoming. Under this sign
// convention overall conservation is +1 on outgoing and -1 on incoming slots.

#include "narratables/error.hpp"
#include "narratables/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace narratables::clusterkit {

using RationalRow = std::vector<Rational>;

class MomentumKernel {
public:
    MomentumKernel(std::string name, std::vector<std::string> in_slots, std::vector<std::string> out_slots,
                   std::vector<RationalRow> deltas, bool smooth_prefactor_present = false,
                   std::string spin_structure = {})
        : name_(std::move(name)),
          in_slots_(std::move(in_slots)),
          out_slots_(std::move(out_slots)),
          deltas_(std::move(deltas)),
          smooth_prefactor_present_(smooth_prefactor_present),
          spin_structure_(std::move(spin_structure)) {
        const std::size_t n = columns();
        if (n < 2) fail(ErrorKind::InvalidArgument, "a kernel needs at least two momentum slots");
        std::set<std::string> names;
        for (const auto& s : slot_names())
            if (!names.insert(s).second) fail(ErrorKind::InvalidArgument, "duplicate momentum slot '" + s + "'");
        for (std::size_t r = 0; r < deltas_.size(); ++r) {
            if (deltas_[r].size() != n)
                fail(ErrorKind::DimensionMismatch, "delta row " + std::to_string(r) + " has " +
                                                       std::to_string(deltas_[r].size()) + " coefficients, expected " +
                                                       std::to_string(n));
            if (std::all_of(deltas_[r].begin(), deltas_[r].end(), [](const Rational& x) { return x == 0; }))
                fail(ErrorKind::InvalidArgument, "delta row " + std::to_string(r) + " is identically zero");
        }
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& in_slots() const { return in_slots_; }
    const std::vector<std::string>& out_slots() const { return out_slots_; }
    const std::vector<RationalRow>& deltas() const { return deltas_; }
    bool smooth_prefactor_present() const { return smooth_prefactor_present_; }
    const std::string& spin_structure() const { return spin_structure_; }

    std::size_t columns() const { return in_slots_.size() + out_slots_.size(); }

    /// Column labels: outgoing slots, then incoming.
    std::vector<std::string> slot_names() const {
        std::vector<std::string> names = out_slots_;
        names.insert(names.end(), in_slots_.begin(), in_slots_.end());
        return names;
    }

    MomentumKernel with_deltas(std::vector<RationalRow> deltas) const {
        return MomentumKernel(name_, in_slots_, out_slots_, std::move(deltas), smooth_prefactor_present_,
                              spin_structure_);
    }

    friend bool operator==(const MomentumKernel&, const MomentumKernel&) = default;

private:
    std::string name_;
    std::vector<std::string> in_slots_;
    std::vector<std::string> out_slots_;
    std::vector<RationalRow> deltas_;
    bool smooth_prefactor_present_;
    std::string spin_structure_;
};

/// +1 on outgoing slots, -1 on incoming.
inline RationalRow conservation_vector(const MomentumKernel& kernel) {
    RationalRow c(kernel.columns(), Rational(-1));
    std::fill_n(c.begin(), kernel.out_slots().size(), Rational(1));
    return c;
}

struct EchelonForm {
    std::vector<RationalRow> rows;  // nonzero rows, leading coefficient 1
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
inline EchelonForm reduced_row_echelon(std::vector<RationalRow> rows, std::size_t ncols) {
    EchelonForm out;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const Rational lead = rows[rank][col];
        for (auto& x : rows[rank]) x /= lead;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const Rational factor = rows[r][col];
            for (std::size_t k = col; k < ncols; ++k) rows[r][k] -= factor * rows[rank][k];
        }
        out.pivots.push_back(col);
        ++rank;
    }
    rows.resize(rank);
    out.rows = std::move(rows);
    return out;
}

inline std::vector<std::size_t> support_of(const RationalRow& row) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) s.push_back(i);
    return s;
}

/// True when `v` lies in the span of an echelon basis.
inline bool in_row_space(const EchelonForm& basis, RationalRow v) {
    for (std::size_t k = 0; k < basis.rows.size(); ++k) {
        const Rational f = v[basis.pivots[k]];
        if (f == 0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * basis.rows[k][i];
    }
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

namespace detail {

struct Residual {
    EchelonForm basis;
    std::vector<std::vector<std::size_t>> supports;  // sorted
};

inline Residual make_residual(const EchelonForm& basis) {
    Residual r{basis, {}};
    for (const auto& row : basis.rows) r.supports.push_back(support_of(row));
    std::sort(r.supports.begin(), r.supports.end());
    return r;
}

/// Constraints left once overall conservation is factored out of the row
/// space. Each column where c is nonzero gives one complement of span{c};
/// the one whose basis has the lexicographically smallest supports wins.
inline Residual residual_constraints(const EchelonForm& basis, const RationalRow& c) {
    std::optional<Residual> best;
    for (std::size_t p = 0; p < c.size(); ++p) {
        if (c[p] == 0) continue;
        std::vector<RationalRow> reduced;
        for (const auto& row : basis.rows) {
            RationalRow r = row;
            const Rational f = row[p] / c[p];
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= f * c[i];
            reduced.push_back(std::move(r));
        }
        Residual candidate = make_residual(reduced_row_echelon(std::move(reduced), c.size()));
        if (!best || candidate.supports < best->supports) best = std::move(candidate);
    }
    return *best;
}

} // namespace detail

struct ClusterWitness {
    RationalRow coefficients;
    std::vector<std::size_t> support;
};

enum class VerdictKind { Compliant, Violation, NonConserving };

struct ClusterVerdict {
    bool conserves_momentum = false;
    bool compliant = false;
    std::size_t rank = 0;
    std::optional<ClusterWitness> witness;

    VerdictKind kind() const {
        if (compliant) return VerdictKind::Compliant;
        return conserves_momentum ? VerdictKind::Violation : VerdictKind::NonConserving;
    }
};

inline ClusterVerdict analyze(const MomentumKernel& kernel) {
    const std::size_t n = kernel.columns();
    const RationalRow c = conservation_vector(kernel);
    const EchelonForm basis = reduced_row_echelon(kernel.deltas(), n);

    ClusterVerdict v;
    v.rank = basis.rows.size();
    v.conserves_momentum = v.rank > 0 && in_row_space(basis, c);
    v.compliant = v.conserves_momentum && v.rank == 1;
    if (v.compliant || v.rank == 0) return v;

    const detail::Residual residual =
        v.conserves_momentum ? detail::residual_constraints(basis, c) : detail::make_residual(basis);
    const auto& smallest = residual.supports.front();
    for (const auto& row : residual.basis.rows)
        if (support_of(row) == smallest) {
            v.witness = ClusterWitness{row, smallest};
            break;
        }
    return v;
}

/// Equivalent kernel with overall conservation as its first row followed by
/// the reduced residual constraints.
inline MomentumKernel canonicalize(const MomentumKernel& kernel) {
    const std::size_t n = kernel.columns();
    const RationalRow c = conservation_vector(kernel);
    const EchelonForm basis = reduced_row_echelon(kernel.deltas(), n);
    if (basis.rows.empty() || !in_row_space(basis, c))
        fail(ErrorKind::NotConserving, "kernel '" + kernel.name() + "' has no overall momentum conservation delta");
    std::vector<RationalRow> rows{c};
    if (basis.rows.size() > 1) {
        auto residual = detail::residual_constraints(basis, c);
        for (auto& r : residual.basis.rows) rows.push_back(std::move(r));
    }
    return kernel.with_deltas(std::move(rows));
}

// Rendering

inline std::string render_combination(const MomentumKernel& kernel, const RationalRow& row) {
    const auto names = kernel.slot_names();
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == 0) continue;
        const bool negative = row[i] < 0;
        const Rational mag = negative ? Rational(-row[i]) : row[i];
        if (out.empty()) out += negative ? "−" : "";
        else out += negative ? " − " : " + ";
        if (mag != 1) out += narratables::to_string(mag) + " ";
        out += names[i];
    }
    return out;
}

inline std::string render_delta(const MomentumKernel& kernel, const RationalRow& row) {
    return "δ³(" + render_combination(kernel, row) + ")";
}

inline std::string render_support(const MomentumKernel& kernel, const std::vector<std::size_t>& support) {
    const auto names = kernel.slot_names();
    std::string out = "{";
    for (std::size_t k = 0; k < support.size(); ++k) out += (k ? ", " : "") + names[support[k]];
    return out + "}";
}

inline std::string render_witness(const MomentumKernel& kernel, const ClusterWitness& w) {
    const bool proper = w.support.size() < kernel.columns();
    return render_delta(kernel, w.coefficients) + " constrains " + (proper ? "proper subset " : "all momenta ") +
           render_support(kernel, w.support);
}

inline void render_verdict(std::ostream& out, const MomentumKernel& kernel, const ClusterVerdict& v) {
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
        return s;
    };
    out << "cluster check: " << kernel.name() << "\n";
    out << "  slots: out (" << join(kernel.out_slots()) << "), in (" << join(kernel.in_slots()) << ")\n";
    out << "  deltas:";
    if (kernel.deltas().empty()) out << " none";
    out << "\n";
    for (const auto& row : kernel.deltas()) out << "    " << render_delta(kernel, row) << "\n";
    out << "  smooth prefactor: " << (kernel.smooth_prefactor_present() ? "present" : "absent")
        << " (recorded, not analyzed)\n";
    if (!kernel.spin_structure().empty())
        out << "  spin structure: " << kernel.spin_structure() << " (metadata, no momentum content)\n";
    out << "  rank: " << v.rank << "\n";
    out << "  overall momentum conservation: " << (v.conserves_momentum ? "yes" : "no") << "\n";
    if (v.conserves_momentum) {
        const MomentumKernel canon = canonicalize(kernel);
        out << "  canonical form:";
        for (const auto& row : canon.deltas()) out << " " << render_delta(kernel, row);
        out << "\n";
    }
    if (v.witness) out << "  witness: " << render_witness(kernel, *v.witness) << "\n";
    switch (v.kind()) {
        case VerdictKind::Compliant:
            out << "  verdict: COMPLIANT (single overall momentum conservation delta)\n";
            break;
        case VerdictKind::Violation:
            out << "  verdict: VIOLATION (delta functions beyond overall conservation)\n";
            break;
        case VerdictKind::NonConserving:
            out << "  verdict: NON_CONSERVING (no overall momentum conservation delta)\n";
            break;
    }
}

} // namespace narratables::clusterkit
