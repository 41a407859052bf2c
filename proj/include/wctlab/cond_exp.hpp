// Conditional expectation onto a partition algebra: mu-weighted averaging
// over blocks.  E is the orthogonal projection of L2(mu) onto the
// block-constant functions; as such it is idempotent, self-adjoint,
// positive, unital and contractive.

#pragma once

#include "wctlab/operator.hpp"
#include "wctlab/space.hpp"

#include <vector>

namespace wctlab {

/// Per-block mu-weighted means of f.
inline Eigen::VectorXcd block_means(const MFunc& f, const FiniteMeasureSpace& space,
                                    const Partition& part) {
    require_same_length(f, space, "block_means");
    Eigen::VectorXcd means(part.block_count());
    for (int b = 0; b < part.block_count(); ++b) {
        Complex sum{0.0, 0.0};
        double mass = 0.0;
        for (int i : part.block(b)) {
            sum += f[i] * space.mass(i);
            mass += space.mass(i);
        }
        means[b] = sum / mass;
    }
    return means;
}

inline std::vector<double> block_masses(const FiniteMeasureSpace& space, const Partition& part) {
    std::vector<double> mass(static_cast<std::size_t>(part.block_count()), 0.0);
    for (int b = 0; b < part.block_count(); ++b)
        for (int i : part.block(b)) mass[static_cast<std::size_t>(b)] += space.mass(i);
    return mass;
}

/// E(f): on each block B, the constant (sum_B f_i mu_i) / (sum_B mu_i).
/// Computed by direct block sums, never through the matrix form.
inline MFunc cond_exp(const MFunc& f, const FiniteMeasureSpace& space, const Partition& part) {
    require_same_length(f, space, "cond_exp");
    const Eigen::VectorXcd means = block_means(f, space, part);
    MFunc out(space.size());
    for (int i = 0; i < space.size(); ++i) out[i] = means[part.block_of(i)];
    return out;
}

/// Matrix form of E, for oracle checks: E_ij = mu_j / m_B for i, j in the
/// same block B, zero otherwise.
inline LinOperator cond_exp_operator(const FiniteMeasureSpace& space, const Partition& part) {
    const std::vector<double> mass = block_masses(space, part);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(space.size(), space.size());
    for (int b = 0; b < part.block_count(); ++b)
        for (int i : part.block(b))
            for (int j : part.block(b))
                M(i, j) = space.mass(j) / mass[static_cast<std::size_t>(b)];
    return LinOperator(std::move(M), space);
}

}  // namespace wctlab
