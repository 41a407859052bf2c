// Hermitian eigencalculus on weighted operators: cyclic Jacobi
// diagonalization, PSD fractional powers, polar decomposition, operator
// norms and PSD tests.
//
// The eigensolver is a deterministic cyclic-by-rows Jacobi iteration on the
// frame matrix, swept until the off-diagonal Frobenius mass falls below
// 1e-13 * ||H||_F.  Determinism matters: verification campaigns must be
// byte-reproducible from their seeds.
//
// Kernel cutoffs on this dense path are taken on the spectrum of A*A at
// 1e-12 * lambda_max.  Products A*A computed in floating point carry
// O(n*eps*lambda_max) noise in kernel directions, which the square root
// amplifies to ~1e-7 relative on singular values; a cutoff below that floor
// would let the noise through every fractional power.

#pragma once

#include "wctlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace wctlab {

/// Relative kernel cutoff, applied to the spectrum of PSD operators.
inline constexpr double kRankTolRel = 1e-12;

struct HermitianEig {
    Eigen::VectorXd values;        // real eigenvalues, descending
    Eigen::MatrixXcd frame_vectors;  // orthonormal columns in the frame; empty if not requested
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXcd& H) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = i + 1; j < H.cols(); ++j)
            acc += 2.0 * std::norm(H(i, j));
    return std::sqrt(acc);
}

// Cyclic Jacobi on a Hermitian frame matrix.  Each rotation annihilates one
// off-diagonal pivot via the unitary J = diag(1, conj(phase)) * G(c, s).
inline HermitianEig jacobi_hermitian(Eigen::MatrixXcd H, bool want_vectors) {
    const Eigen::Index n = H.rows();
    H = ((H + H.adjoint().eval()) * 0.5).eval();

    Eigen::MatrixXcd V;
    if (want_vectors) V = Eigen::MatrixXcd::Identity(n, n);

    const double norm_f = H.norm();
    const double threshold = 1e-13 * norm_f;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(H) > threshold; ++sweep) {
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex hpq = H(p, q);
                const double apq = std::abs(hpq);
                if (apq <= std::numeric_limits<double>::min()) continue;

                const double app = H(p, p).real();
                const double aqq = H(q, q).real();
                const Complex phase = hpq / apq;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const Complex cs_right = std::conj(phase) * s;
                const Complex cc_right = std::conj(phase) * c;
                Eigen::VectorXcd colp = H.col(p), colq = H.col(q);
                H.col(p) = c * colp - cs_right * colq;
                H.col(q) = s * colp + cc_right * colq;

                Eigen::RowVectorXcd rowp = H.row(p), rowq = H.row(q);
                H.row(p) = c * rowp - (phase * s) * rowq;
                H.row(q) = s * rowp + (phase * c) * rowq;

                H(p, p) = Complex(app - t * apq, 0.0);
                H(q, q) = Complex(aqq + t * apq, 0.0);
                H(p, q) = Complex(0.0, 0.0);
                H(q, p) = Complex(0.0, 0.0);

                if (want_vectors) {
                    Eigen::VectorXcd vp = V.col(p), vq = V.col(q);
                    V.col(p) = c * vp - cs_right * vq;
                    V.col(q) = s * vp + cc_right * vq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return H(a, a).real() > H(b, b).real();
    });

    HermitianEig out;
    out.values.resize(n);
    if (want_vectors) out.frame_vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = H(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        if (want_vectors) out.frame_vectors.col(k) = V.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

}  // namespace detail

/// Eigendecomposition of a weighted-self-adjoint operator.  Precondition:
/// ||F - F^H||_F <= 1e-12 * ||F||_F in the frame.
inline HermitianEig hermitian_eig(const LinOperator& H, bool want_vectors = true) {
    Eigen::MatrixXcd F = to_frame(H);
    const double defect = (F - F.adjoint().eval()).norm();
    if (defect > 1e-12 * F.norm())
        throw std::domain_error("hermitian_eig: operator is not self-adjoint on L2(mu)");
    return detail::jacobi_hermitian(std::move(F), want_vectors);
}

/// Largest singular value, computed from the spectrum of A*A.
inline double op_norm(const LinOperator& A) {
    HermitianEig e = hermitian_eig(adjoint(A) * A, /*want_vectors=*/false);
    return std::sqrt(std::max(e.values[0], 0.0));
}

/// Singular values, descending.
inline Eigen::VectorXd singular_values(const LinOperator& A) {
    HermitianEig e = hermitian_eig(adjoint(A) * A, /*want_vectors=*/false);
    Eigen::VectorXd s = e.values;
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(s[i], 0.0));
    return s;
}

/// PSD test: min eigenvalue >= -tol * max(1, max |eigenvalue|).
inline bool is_psd(const LinOperator& H, double tol) {
    HermitianEig e = hermitian_eig(H, /*want_vectors=*/false);
    const Eigen::Index n = e.values.size();
    const double magnitude = std::max(std::abs(e.values[0]), std::abs(e.values[n - 1]));
    return e.values[n - 1] >= -tol * std::max(1.0, magnitude);
}

/// Fractional power of a PSD operator.  Eigenvalues below
/// rank_tol_rel * lambda_max are treated as kernel and mapped to 0 for every
/// exponent, 0^p := 0 included; in particular p = 0 yields the range
/// projection.  Precondition: min eigenvalue >= -1e-10 * max eigenvalue.
inline LinOperator psd_power(const LinOperator& H, double p, double rank_tol_rel = kRankTolRel) {
    if (p < 0.0) throw std::invalid_argument("psd_power: exponent must be >= 0");
    HermitianEig e = hermitian_eig(H, /*want_vectors=*/true);
    const Eigen::Index n = e.values.size();
    const double lmax = std::max(e.values[0], 0.0);
    if (e.values[n - 1] < -1e-10 * lmax)
        throw std::domain_error("psd_power: spectrum is materially negative");
    const double cut = rank_tol_rel * lmax;
    Eigen::VectorXd powered(n);
    for (Eigen::Index i = 0; i < n; ++i)
        powered[i] = (e.values[i] <= cut) ? 0.0 : std::pow(e.values[i], p);
    Eigen::MatrixXcd F = e.frame_vectors * powered.asDiagonal() * e.frame_vectors.adjoint();
    return from_frame(F, H.space());
}

/// Spectral data of a polar decomposition T = U |T|, kept in the frame so
/// arbitrary powers of |T| are cheap to assemble.  Kernel singular values
/// are exactly 0 after the cutoff.
struct PolarData {
    FiniteMeasureSpace space;
    Eigen::MatrixXcd vectors;   // frame eigenvectors of |T| (columns)
    Eigen::VectorXd sigma;      // singular values, descending, kernel zeroed
    Eigen::MatrixXcd U_frame;   // partial isometry in the frame

    LinOperator partial_isometry() const { return from_frame(U_frame, space); }

    LinOperator absolute() const { return absolute_power(1.0); }

    /// |T|^x with the convention 0^x := 0; x = 0 gives the range projection.
    LinOperator absolute_power(double x) const {
        Eigen::VectorXd powered(sigma.size());
        for (Eigen::Index i = 0; i < sigma.size(); ++i)
            powered[i] = (sigma[i] == 0.0) ? 0.0 : std::pow(sigma[i], x);
        Eigen::MatrixXcd F = vectors * powered.asDiagonal() * vectors.adjoint();
        return from_frame(F, space);
    }

    LinOperator range_projection() const { return absolute_power(0.0); }

    int rank() const {
        int r = 0;
        for (Eigen::Index i = 0; i < sigma.size(); ++i)
            if (sigma[i] > 0.0) ++r;
        return r;
    }
};

inline PolarData polar_data(const LinOperator& T, double rank_tol_rel = kRankTolRel) {
    HermitianEig e = hermitian_eig(adjoint(T) * T, /*want_vectors=*/true);
    const Eigen::Index n = e.values.size();
    const double lmax = std::max(e.values[0], 0.0);
    const double cut = rank_tol_rel * lmax;

    Eigen::VectorXd sigma(n);
    for (Eigen::Index i = 0; i < n; ++i)
        sigma[i] = (e.values[i] <= cut) ? 0.0 : std::sqrt(e.values[i]);

    Eigen::MatrixXcd Tf = to_frame(T);
    Eigen::MatrixXcd Uf = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sigma[i] == 0.0) continue;
        Uf += ((Tf * e.frame_vectors.col(i)) / sigma[i]) * e.frame_vectors.col(i).adjoint();
    }
    return PolarData{T.space(), std::move(e.frame_vectors), std::move(sigma), std::move(Uf)};
}

struct PolarDecomposition {
    LinOperator partial_isometry;
    LinOperator absolute;
};

/// T = U |T| with N(U) = N(|T|) at the kernel cutoff.  The zero operator
/// decomposes as U = |T| = 0.
inline PolarDecomposition polar(const LinOperator& T, double rank_tol_rel = kRankTolRel) {
    PolarData pd = polar_data(T, rank_tol_rel);
    return PolarDecomposition{pd.partial_isometry(), pd.absolute()};
}

}  // namespace wctlab
