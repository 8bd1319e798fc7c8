#pragma once

// Finite-dimensional stand-ins for Poincare generators. These matrices can
// never form a genuine unitary representation, so everything here measures
// residuals rather than certifying the algebra.

#include "narratables/error.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace narratables::algebra {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kSameHistoryTolerance = 1e-9;
inline constexpr double kProportionalityTolerance = 1e-9;
inline constexpr double kDegeneracyFactor = 1e-9;

inline double hermiticity_defect(const CMatrix& a) { return (a - a.adjoint()).norm(); }

inline bool is_hermitian(const CMatrix& a, double tolerance = kHermitianTolerance) {
    return hermiticity_defect(a) <= tolerance * std::max(1.0, a.norm());
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

// Generator bookkeeping: index 0 is H, then P1..P3, J1..J3, K1..K3.

enum class GeneratorKind { H, P, J, K };

struct GeneratorId {
    GeneratorKind kind;
    int axis;  // 0..2, unused for H

    std::size_t index() const {
        switch (kind) {
            case GeneratorKind::H: return 0;
            case GeneratorKind::P: return 1 + static_cast<std::size_t>(axis);
            case GeneratorKind::J: return 4 + static_cast<std::size_t>(axis);
            case GeneratorKind::K: return 7 + static_cast<std::size_t>(axis);
        }
        return 0;
    }

    static GeneratorId from_index(std::size_t i) {
        if (i == 0) return {GeneratorKind::H, 0};
        if (i < 4) return {GeneratorKind::P, static_cast<int>(i - 1)};
        if (i < 7) return {GeneratorKind::J, static_cast<int>(i - 4)};
        return {GeneratorKind::K, static_cast<int>(i - 7)};
    }

    std::string name() const {
        switch (kind) {
            case GeneratorKind::H: return "H";
            case GeneratorKind::P: return "P" + std::to_string(axis + 1);
            case GeneratorKind::J: return "J" + std::to_string(axis + 1);
            case GeneratorKind::K: return "K" + std::to_string(axis + 1);
        }
        return "?";
    }
};

inline constexpr std::size_t kGeneratorCount = 10;

inline std::optional<std::size_t> generator_index(const std::string& name) {
    for (std::size_t i = 0; i < kGeneratorCount; ++i)
        if (GeneratorId::from_index(i).name() == name) return i;
    return std::nullopt;
}

class GeneratorSet {
public:
    void set(const std::string& name, CMatrix m) {
        auto idx = generator_index(name);
        if (!idx) fail(ErrorKind::InvalidArgument, "unknown generator '" + name + "'");
        set(*idx, std::move(m));
    }

    void set(std::size_t index, CMatrix m) {
        if (m.rows() != m.cols())
            fail(ErrorKind::DimensionMismatch, GeneratorId::from_index(index).name() + " is not square");
        for (const auto& g : gens_)
            if (g && g->rows() != m.rows())
                fail(ErrorKind::DimensionMismatch, GeneratorId::from_index(index).name() + " has dimension " +
                                                       std::to_string(m.rows()) + ", others have " +
                                                       std::to_string(g->rows()));
        gens_[index] = std::move(m);
    }

    const std::optional<CMatrix>& get(std::size_t index) const { return gens_[index]; }
    const std::optional<CMatrix>& get(GeneratorId id) const { return gens_[id.index()]; }

    std::size_t present() const {
        return static_cast<std::size_t>(std::count_if(gens_.begin(), gens_.end(), [](const auto& g) { return g.has_value(); }));
    }

    std::optional<Eigen::Index> dim() const {
        for (const auto& g : gens_)
            if (g) return g->rows();
        return std::nullopt;
    }

    /// ||A - A^dagger||_F for the generators that ought to be Hermitian (H, P, J).
    std::vector<std::pair<std::string, double>> hermiticity_report() const {
        std::vector<std::pair<std::string, double>> out;
        for (std::size_t i = 0; i < 7; ++i)
            if (gens_[i]) out.emplace_back(GeneratorId::from_index(i).name(), hermiticity_defect(*gens_[i]));
        return out;
    }

private:
    std::array<std::optional<CMatrix>, kGeneratorCount> gens_;
};

inline int levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

using LinearCombination = std::vector<std::pair<GeneratorId, Complex>>;

namespace detail {

inline int kind_rank(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::J: return 0;
        case GeneratorKind::K: return 1;
        case GeneratorKind::P: return 2;
        case GeneratorKind::H: return 3;
    }
    return 4;
}

/// Right-hand side of [a, b] for kind_rank(a) <= kind_rank(b).
inline LinearCombination ordered_bracket(GeneratorId a, GeneratorId b) {
    using K = GeneratorKind;
    const Complex i_unit(0.0, 1.0);
    LinearCombination rhs;
    auto epsilon_term = [&](GeneratorKind target, Complex factor) {
        for (int k = 0; k < 3; ++k)
            if (int e = levi_civita(a.axis, b.axis, k)) rhs.push_back({{target, k}, factor * static_cast<double>(e)});
    };
    if (a.kind == K::J && b.kind == K::J) epsilon_term(K::J, i_unit);         // [Ji,Jj] = i e_ijk Jk
    else if (a.kind == K::J && b.kind == K::K) epsilon_term(K::K, i_unit);    // [Ji,Kj] = i e_ijk Kk
    else if (a.kind == K::J && b.kind == K::P) epsilon_term(K::P, i_unit);    // [Ji,Pj] = i e_ijk Pk
    else if (a.kind == K::K && b.kind == K::K) epsilon_term(K::J, -i_unit);   // [Ki,Kj] = -i e_ijk Jk
    else if (a.kind == K::K && b.kind == K::P) {                              // [Ki,Pj] = -i d_ij H
        if (a.axis == b.axis) rhs.push_back({{K::H, 0}, -i_unit});
    } else if (a.kind == K::K && b.kind == K::H) {                            // [Ki,H] = -i Pi
        rhs.push_back({{K::P, a.axis}, -i_unit});
    }
    // [Ji,H] = [Pi,H] = [Pi,Pj] = 0
    return rhs;
}

} // namespace detail

/// Required value of [a, b] in the Poincare algebra with [Pi, Kj] = i d_ij H.
inline LinearCombination required_bracket(GeneratorId a, GeneratorId b) {
    if (detail::kind_rank(a.kind) <= detail::kind_rank(b.kind)) return detail::ordered_bracket(a, b);
    LinearCombination rhs = detail::ordered_bracket(b, a);
    for (auto& term : rhs) term.second = -term.second;
    return rhs;
}

struct BracketResidual {
    std::string name;  // e.g. "[P1,K1]"
    double residual = 0.0;
};

/// ||[A,B] - required(A,B)||_F for every pair whose operands and right-hand
/// side generators are all supplied.
inline std::vector<BracketResidual> bracket_residuals(const GeneratorSet& gens) {
    if (gens.present() < 2) fail(ErrorKind::InvalidArgument, "bracket residuals need at least two generators");
    std::vector<BracketResidual> table;
    for (std::size_t i = 0; i < kGeneratorCount; ++i) {
        for (std::size_t j = i + 1; j < kGeneratorCount; ++j) {
            const auto& a = gens.get(i);
            const auto& b = gens.get(j);
            if (!a || !b) continue;
            const GeneratorId ia = GeneratorId::from_index(i);
            const GeneratorId ib = GeneratorId::from_index(j);
            const LinearCombination rhs = required_bracket(ia, ib);
            CMatrix diff = commutator(*a, *b);
            bool checkable = true;
            for (const auto& [id, coeff] : rhs) {
                const auto& g = gens.get(id);
                if (!g) {
                    checkable = false;
                    break;
                }
                diff -= coeff * *g;
            }
            if (checkable) table.push_back({"[" + ia.name() + "," + ib.name() + "]", diff.norm()});
        }
    }
    return table;
}

/// H = H0 + V with free boosts K0 (any subset of the three axes).
struct SplitSystem {
    CMatrix H0;
    CMatrix V;
    std::array<std::optional<CMatrix>, 3> K0;

    CMatrix H() const { return H0 + V; }

    /// Dimension errors throw; Hermiticity problems come back as warnings.
    std::vector<std::string> validate() const {
        const auto n = H0.rows();
        auto check = [&](const CMatrix& m, const std::string& name) {
            if (m.rows() != n || m.cols() != n)
                fail(ErrorKind::DimensionMismatch, name + " is " + std::to_string(m.rows()) + "x" +
                                                       std::to_string(m.cols()) + ", expected " + std::to_string(n) +
                                                       "x" + std::to_string(n));
        };
        check(H0, "H0");
        check(V, "V");
        for (int a = 0; a < 3; ++a)
            if (K0[a]) check(*K0[a], "K0_" + std::to_string(a + 1));
        std::vector<std::string> warnings;
        if (!is_hermitian(H0)) warnings.push_back("NonHermitianInput: H0 is not Hermitian");
        if (!is_hermitian(V)) warnings.push_back("NonHermitianInput: V is not Hermitian");
        return warnings;
    }
};

struct WSolution {
    CMatrix W;
    double residual = 0.0;   // ||[K0,V] + [W,H]||_F
    double scale = 1.0;      // max(1, ||H||_F, ||[K0,V]||_F)
    double eps_deg = 0.0;
    double eps_obs = 0.0;
    bool hermitian_path = true;
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_obstructions;
    std::vector<std::string> warnings;
};

/// Boost correction W along `axis` (0..2) from [K0, V] = -[W, H], solved in
/// the energy eigenbasis: W_ab = <a|[K0,V]|b> / (E_a - E_b). Entries between
/// degenerate levels are set to zero; nonzero [K0,V] elements there are
/// reported as obstructions.
inline WSolution solve_W(const SplitSystem& sys, std::size_t axis) {
    if (axis > 2) fail(ErrorKind::IndexOutOfRange, "boost axis must be 0, 1 or 2");
    if (!sys.K0[axis]) fail(ErrorKind::InvalidArgument, "no free boost supplied for axis " + std::to_string(axis + 1));
    WSolution sol;
    sol.warnings = sys.validate();
    const CMatrix H = sys.H();
    const CMatrix C = commutator(*sys.K0[axis], sys.V);
    const auto n = H.rows();
    sol.eps_deg = kDegeneracyFactor * H.norm();
    sol.eps_obs = kDegeneracyFactor * C.norm();
    sol.scale = std::max({1.0, H.norm(), C.norm()});

    CMatrix basis, basis_inv;
    CVector energies;
    sol.hermitian_path = is_hermitian(H);
    if (sol.hermitian_path) {
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(H);
        basis = eig.eigenvectors();
        basis_inv = basis.adjoint();
        energies = eig.eigenvalues().cast<Complex>();
    } else {
        sol.warnings.push_back("NonHermitianInput: H = H0 + V is not Hermitian; using a general eigendecomposition");
        Eigen::ComplexEigenSolver<CMatrix> eig(H);
        basis = eig.eigenvectors();
        basis_inv = basis.inverse();
        energies = eig.eigenvalues();
    }

    const CMatrix c_eig = basis_inv * C * basis;
    CMatrix w_eig = CMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const Complex gap = energies(a) - energies(b);
            if (std::abs(gap) > sol.eps_deg) {
                w_eig(a, b) = c_eig(a, b) / gap;
            } else if (std::abs(c_eig(a, b)) > sol.eps_obs) {
                sol.degenerate_obstructions.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
        }
    }
    sol.W = basis * w_eig * basis_inv;
    sol.residual = (C + commutator(sol.W, H)).norm();
    return sol;
}

/// W1 - W2: the analogue of W when both histories are interacting.
inline CMatrix boost_correction_difference(const CMatrix& H0, const CMatrix& V1, const CMatrix& V2, const CMatrix& K0) {
    SplitSystem s1{H0, V1, {K0, std::nullopt, std::nullopt}};
    SplitSystem s2{H0, V2, {K0, std::nullopt, std::nullopt}};
    return solve_W(s1, 0).W - solve_W(s2, 0).W;
}

/// exp(i H t) applied to vectors; spectral for Hermitian H, Pade
/// scaling-and-squaring otherwise.
class Propagator {
public:
    explicit Propagator(const CMatrix& H) : H_(H), hermitian_(is_hermitian(H)) {
        if (hermitian_) {
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(H);
            basis_ = eig.eigenvectors();
            energies_ = eig.eigenvalues();
        }
    }

    bool hermitian() const { return hermitian_; }

    CVector apply(const CVector& psi, double t) const {
        if (hermitian_) {
            CVector coeffs = basis_.adjoint() * psi;
            for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(Complex(0.0, energies_(k) * t));
            return basis_ * coeffs;
        }
        const CMatrix generator = Complex(0.0, t) * H_;
        return CMatrix(generator.exp()) * psi;
    }

private:
    CMatrix H_;
    bool hermitian_;
    CMatrix basis_;
    Eigen::VectorXd energies_;
};

inline void require_unit(const CVector& psi, const std::string& what) {
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        fail(ErrorKind::InvalidArgument, what + " must have unit norm (got " + std::to_string(psi.norm()) + ")");
}

struct SameHistoryResult {
    bool same = true;
    std::vector<std::pair<double, Complex>> c;  // (t, <w(t)|u(t)>)
    std::vector<std::string> warnings;
};

/// Checks exp(i(H0+Va)t) psi0 = c(t) exp(i(H0+Vb)t) psi0 at every sampled t.
inline SameHistoryResult same_history_check(const CMatrix& H0, const CMatrix& Va, const CMatrix& Vb,
                                            const CVector& psi0, const std::vector<double>& times,
                                            double tolerance = kSameHistoryTolerance) {
    const auto n = H0.rows();
    auto check = [&](const CMatrix& m, const char* name) {
        if (m.rows() != n || m.cols() != n)
            fail(ErrorKind::DimensionMismatch, std::string(name) + " does not match H0's dimension " + std::to_string(n));
    };
    check(H0, "H0");
    check(Va, "Va");
    check(Vb, "Vb");
    if (psi0.size() != n) fail(ErrorKind::DimensionMismatch, "psi0 does not match H0's dimension " + std::to_string(n));
    if (times.empty()) fail(ErrorKind::InvalidArgument, "same-history check needs at least one time sample");
    require_unit(psi0, "psi0");

    SameHistoryResult result;
    const Propagator ua(H0 + Va);
    const Propagator ub(H0 + Vb);
    if (!ua.hermitian()) result.warnings.push_back("NonHermitianInput: H0 + Va is not Hermitian");
    if (!ub.hermitian()) result.warnings.push_back("NonHermitianInput: H0 + Vb is not Hermitian");
    for (double t : times) {
        const CVector u = ua.apply(psi0, t);
        const CVector w = ub.apply(psi0, t);
        const Complex c = w.dot(u);
        if (std::abs(std::abs(c) - 1.0) > tolerance) result.same = false;
        result.c.emplace_back(t, c);
    }
    return result;
}

struct BoostCheck {
    bool nontrivial = false;
    double residual = 0.0;  // ||W psi - <psi|W psi> psi||
    Complex expectation;    // <psi|W psi>
};

/// Nontrivial iff W psi is not proportional to psi.
inline BoostCheck boost_nontriviality_check(const CMatrix& W, const CVector& psi,
                                            double tolerance = kProportionalityTolerance) {
    if (W.rows() != W.cols() || W.rows() != psi.size())
        fail(ErrorKind::DimensionMismatch, "W is " + std::to_string(W.rows()) + "x" + std::to_string(W.cols()) +
                                               ", psi has " + std::to_string(psi.size()) + " entries");
    require_unit(psi, "psi");
    BoostCheck out;
    const CVector wpsi = W * psi;
    out.expectation = psi.dot(wpsi);
    out.residual = (wpsi - out.expectation * psi).norm();
    out.nontrivial = out.residual > tolerance;
    return out;
}

} // namespace narratables::algebra
