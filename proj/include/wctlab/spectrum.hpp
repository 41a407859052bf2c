// Point spectrum, joint point spectrum, structural eigenvectors and
// invertibility of weighted conditional-type operators.
//
// The point spectrum is computed structurally: the nonzero eigenvalues of
// M_w E M_u are exactly the nonzero block values of E(uw) (each block has
// positive mass, so each level set does too), and 0 belongs iff the rank
// falls short of the dimension.  The dense eigensolver route exists only as
// a test oracle.

#pragma once

#include "wctlab/hermitian.hpp"
#include "wctlab/wct.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace wctlab {

inline double default_merge_tol(const WCTInstance& inst) {
    double m = 0.0;
    for (int b = 0; b < inst.blocks(); ++b) m = std::max(m, std::abs(inst.exp_uw_block[b]));
    return 1e-10 * (1.0 + m);
}

namespace detail {

inline bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Deterministic dedup: sort lexicographically, then merge values within tol
// of the running representative.
inline std::vector<Complex> merge_values(std::vector<Complex> vals, double tol) {
    std::sort(vals.begin(), vals.end(), complex_less);
    std::vector<Complex> out;
    for (const Complex& v : vals) {
        if (!out.empty() && std::abs(v - out.back()) <= tol) continue;
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

/// Distinct nonzero block values of E(uw), plus 0 iff rank(T) < n.
/// Values within merge_tol of each other collapse to one; when the kernel
/// contributes a 0 eigenvalue, block values within merge_tol of 0 merge into
/// it.  (Full rank forces singleton blocks with E(uw) = u w pointwise, so no
/// block value can be 0 then.)
inline std::vector<Complex> point_spectrum(const WCTInstance& inst, double merge_tol = -1.0,
                                           double rank_tol_rel = kRankTolRel) {
    if (merge_tol < 0.0) merge_tol = default_merge_tol(inst);
    const bool rank_deficient = inst.structural_rank(rank_tol_rel) < inst.size();
    const double zero_cut = rank_deficient ? merge_tol : 0.0;
    std::vector<Complex> nonzero;
    for (int b = 0; b < inst.blocks(); ++b)
        if (std::abs(inst.exp_uw_block[b]) > zero_cut) nonzero.push_back(inst.exp_uw_block[b]);
    std::vector<Complex> out = detail::merge_values(std::move(nonzero), merge_tol);
    if (rank_deficient) out.insert(out.begin(), Complex{0.0, 0.0});
    std::sort(out.begin(), out.end(), detail::complex_less);
    return out;
}

struct EigenWitness {
    MFunc vector;     // w * chi_B
    Complex lambda;   // E(uw) on B
};

/// Structural eigenvector for block B: T(w chi_B) = E(uw)|_B (w chi_B).
/// No witness when w vanishes identically on B.
inline std::optional<EigenWitness> eigen_witness(const WCTInstance& inst, int b) {
    if (b < 0 || b >= inst.blocks())
        throw std::invalid_argument("eigen_witness: block index out of range");
    bool w_nonzero = false;
    for (int i : inst.part.block(b))
        if (inst.w[i] != Complex{0.0, 0.0}) w_nonzero = true;
    if (!w_nonzero) return std::nullopt;
    MFunc v = MFunc::Zero(inst.size());
    for (int i : inst.part.block(b)) v[i] = inst.w[i];
    return EigenWitness{std::move(v), inst.exp_uw_block[b]};
}

/// Joint point spectrum: lambda in sigma_p admitting a common unit vector
/// killed by both T - lambda and T* - conj(lambda).  Tested through the PSD
/// operator H = (T-l)*(T-l) + (T-l)(T-l)*; lambda joins iff the smallest
/// eigenvalue of H is <= tol * (1 + ||T||^2).  Subset of sigma_p by
/// construction.
inline std::vector<Complex> joint_point_spectrum(const WCTInstance& inst, double tol = 1e-8,
                                                 double merge_tol = -1.0) {
    const std::vector<Complex> sigma_p = point_spectrum(inst, merge_tol);
    const LinOperator T = as_operator(inst);
    const LinOperator I = identity_operator(inst.space);
    const double norm_T = norm_formula(inst);
    std::vector<Complex> out;
    for (const Complex& lambda : sigma_p) {
        LinOperator A = T - lambda * I;
        LinOperator H = adjoint(A) * A + A * adjoint(A);
        HermitianEig e = hermitian_eig(H, /*want_vectors=*/false);
        const double min_eig = e.values[e.values.size() - 1];
        if (min_eig <= tol * (1.0 + norm_T * norm_T)) out.push_back(lambda);
    }
    return out;
}

/// Invertibility via structural singular values: all n blocks must be
/// singletons-equivalent in rank terms (m = n) and the smallest structural
/// singular value must exceed tol times the largest.
inline bool is_invertible(const WCTInstance& inst, double tol = kRankTolRel) {
    if (inst.blocks() < inst.size()) return false;
    const Eigen::VectorXd s = inst.structural_singular_values();
    return s.minCoeff() > tol * s.maxCoeff();
}

}  // namespace wctlab
