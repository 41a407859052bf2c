// Dense complex operators on the weighted space L2(mu).
//
// The matrix acts on point values, (Af)_i = sum_j A_ij f_j.  The adjoint is
// taken with respect to the weighted inner product of space.hpp; conjugating
// by D = diag(sqrt(mu_i)) (the orthonormal frame) turns it into the plain
// conjugate transpose, so all spectral work happens on to_frame(A).

#pragma once

#include "wctlab/space.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace wctlab {

class LinOperator {
public:
    LinOperator(Eigen::MatrixXcd matrix, FiniteMeasureSpace space)
        : mat_(std::move(matrix)), space_(std::move(space)) {
        if (mat_.rows() != mat_.cols())
            throw std::invalid_argument("LinOperator: matrix must be square");
        if (mat_.rows() != space_.size())
            throw std::invalid_argument("LinOperator: matrix dimension does not match space");
    }

    int size() const { return space_.size(); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const FiniteMeasureSpace& space() const { return space_; }

    MFunc apply(const MFunc& f) const {
        require_same_length(f, space_, "LinOperator::apply");
        return mat_ * f;
    }

private:
    Eigen::MatrixXcd mat_;
    FiniteMeasureSpace space_;
};

inline LinOperator identity_operator(const FiniteMeasureSpace& space) {
    return LinOperator(Eigen::MatrixXcd::Identity(space.size(), space.size()), space);
}

inline LinOperator zero_operator(const FiniteMeasureSpace& space) {
    return LinOperator(Eigen::MatrixXcd::Zero(space.size(), space.size()), space);
}

/// Multiplication operator M_g: f -> g*f.
inline LinOperator multiplication_operator(const MFunc& g, const FiniteMeasureSpace& space) {
    require_same_length(g, space, "multiplication_operator");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.size(), space.size());
    for (int i = 0; i < space.size(); ++i) m(i, i) = g[i];
    return LinOperator(std::move(m), space);
}

/// Frame matrix D A D^{-1} with D = diag(sqrt(mu_i)).  Unitarily equivalent
/// to A as an operator on L2(mu); adjoints become conjugate transposes.
inline Eigen::MatrixXcd to_frame(const LinOperator& A) {
    const int n = A.size();
    Eigen::MatrixXcd F(n, n);
    for (int i = 0; i < n; ++i) {
        const double di = std::sqrt(A.space().mass(i));
        for (int j = 0; j < n; ++j)
            F(i, j) = A.matrix()(i, j) * (di / std::sqrt(A.space().mass(j)));
    }
    return F;
}

inline LinOperator from_frame(const Eigen::MatrixXcd& F, const FiniteMeasureSpace& space) {
    if (F.rows() != F.cols() || F.rows() != space.size())
        throw std::invalid_argument("from_frame: dimension mismatch");
    const int n = space.size();
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i) {
        const double di = std::sqrt(space.mass(i));
        for (int j = 0; j < n; ++j)
            M(i, j) = F(i, j) * (std::sqrt(space.mass(j)) / di);
    }
    return LinOperator(std::move(M), space);
}

/// Adjoint w.r.t. the weighted inner product: (A*)_ij = conj(A_ji) mu_j / mu_i.
inline LinOperator adjoint(const LinOperator& A) {
    const int n = A.size();
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = std::conj(A.matrix()(j, i)) * (A.space().mass(j) / A.space().mass(i));
    return LinOperator(std::move(M), A.space());
}

inline void require_same_space(const LinOperator& A, const LinOperator& B, const char* who) {
    if (A.size() != B.size())
        throw std::invalid_argument(std::string(who) + ": operators act on different spaces");
}

inline LinOperator operator*(const LinOperator& A, const LinOperator& B) {
    require_same_space(A, B, "operator*");
    return LinOperator(A.matrix() * B.matrix(), A.space());
}

inline LinOperator operator+(const LinOperator& A, const LinOperator& B) {
    require_same_space(A, B, "operator+");
    return LinOperator(A.matrix() + B.matrix(), A.space());
}

inline LinOperator operator-(const LinOperator& A, const LinOperator& B) {
    require_same_space(A, B, "operator-");
    return LinOperator(A.matrix() - B.matrix(), A.space());
}

inline LinOperator operator*(Complex c, const LinOperator& A) {
    return LinOperator(c * A.matrix(), A.space());
}

/// Frobenius norm; unitarily invariant, so frame and point forms disagree
/// only through the mass weights -- we always take it in the frame.
inline double frobenius_norm(const LinOperator& A) {
    return to_frame(A).norm();
}

}  // namespace wctlab
