// Finite atomic measure spaces, partitions (sub-sigma-algebras), and
// complex-valued point functions with the weighted L2(mu) geometry.
//
// A space is a list of strictly positive point masses mu_i.  A sub-sigma-
// algebra of the full power set is exactly a partition of the points into
// blocks; a function is measurable for it iff it is constant on each block.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wctlab {

using Complex = std::complex<double>;

/// One complex value per point of the space.
using MFunc = Eigen::VectorXcd;

/// Relative threshold below which a value counts as zero for support sets.
inline constexpr double kDefaultZeroTol = 1e-14;

class FiniteMeasureSpace {
public:
    explicit FiniteMeasureSpace(Eigen::VectorXd masses) : mu_(std::move(masses)) {
        if (mu_.size() < 1)
            throw std::invalid_argument("FiniteMeasureSpace: need at least one point");
        for (Eigen::Index i = 0; i < mu_.size(); ++i)
            if (!std::isfinite(mu_[i]) || !(mu_[i] > 0.0))
                throw std::invalid_argument("FiniteMeasureSpace: mass at position " +
                                            std::to_string(i + 1) + " must be finite and > 0");
    }

    explicit FiniteMeasureSpace(std::initializer_list<double> masses)
        : FiniteMeasureSpace(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
              std::data(masses), static_cast<Eigen::Index>(masses.size())))) {}

    int size() const { return static_cast<int>(mu_.size()); }
    double mass(int i) const { return mu_[i]; }
    const Eigen::VectorXd& masses() const { return mu_; }
    double total_mass() const { return mu_.sum(); }

private:
    Eigen::VectorXd mu_;
};

/// Partition of {0..n-1} into non-empty, pairwise disjoint blocks.
class Partition {
public:
    Partition(std::vector<std::vector<int>> blocks, int n) : blocks_(std::move(blocks)) {
        if (n < 1) throw std::invalid_argument("Partition: empty space");
        block_of_.assign(static_cast<std::size_t>(n), -1);
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].empty())
                throw std::invalid_argument("Partition: block " + std::to_string(b + 1) + " is empty");
            for (int i : blocks_[b]) {
                if (i < 0 || i >= n)
                    throw std::invalid_argument("Partition: block " + std::to_string(b + 1) +
                                                " has index " + std::to_string(i + 1) +
                                                " outside 1.." + std::to_string(n));
                if (block_of_[static_cast<std::size_t>(i)] != -1)
                    throw std::invalid_argument("Partition: index " + std::to_string(i + 1) +
                                                " appears in more than one block");
                block_of_[static_cast<std::size_t>(i)] = static_cast<int>(b);
            }
        }
        for (int i = 0; i < n; ++i)
            if (block_of_[static_cast<std::size_t>(i)] == -1)
                throw std::invalid_argument("Partition: index " + std::to_string(i + 1) +
                                            " is not covered by any block");
    }

    int size() const { return static_cast<int>(block_of_.size()); }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<int>& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
    int block_of(int i) const { return block_of_[static_cast<std::size_t>(i)]; }

    static Partition singletons(int n) {
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(i)] = {i};
        return Partition(std::move(blocks), n);
    }

private:
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

inline void require_same_length(const MFunc& f, const FiniteMeasureSpace& space, const char* who) {
    if (f.size() != space.size())
        throw std::invalid_argument(std::string(who) + ": function has length " +
                                    std::to_string(f.size()) + ", expected " +
                                    std::to_string(space.size()));
}

/// Weighted inner product <f,g> = sum_i f_i conj(g_i) mu_i.
inline Complex inner(const MFunc& f, const MFunc& g, const FiniteMeasureSpace& space) {
    require_same_length(f, space, "inner");
    require_same_length(g, space, "inner");
    Complex acc{0.0, 0.0};
    for (int i = 0; i < space.size(); ++i) acc += f[i] * std::conj(g[i]) * space.mass(i);
    return acc;
}

inline double norm_l2(const MFunc& f, const FiniteMeasureSpace& space) {
    require_same_length(f, space, "norm_l2");
    double acc = 0.0;
    for (int i = 0; i < space.size(); ++i) acc += std::norm(f[i]) * space.mass(i);
    return std::sqrt(acc);
}

/// Essential supremum; with all masses positive this is the max modulus.
inline double ess_sup(const MFunc& f) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

/// Indices i with |f_i| > zero_tol * max_j |f_j|.  Empty for the zero function.
inline std::vector<int> support(const MFunc& f, double zero_tol = kDefaultZeroTol) {
    if (zero_tol < 0.0) throw std::invalid_argument("support: zero_tol must be >= 0");
    const double cut = zero_tol * ess_sup(f);
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > cut) idx.push_back(static_cast<int>(i));
    return idx;
}

/// Measurability test for the partition algebra: within each block the max
/// deviation from the block's mu-weighted mean must be <= tol * (1 + max|f|).
inline bool is_block_constant(const MFunc& f, const FiniteMeasureSpace& space,
                              const Partition& part, double tol = 1e-12) {
    require_same_length(f, space, "is_block_constant");
    const double bound = tol * (1.0 + ess_sup(f));
    for (int b = 0; b < part.block_count(); ++b) {
        Complex sum{0.0, 0.0};
        double mass = 0.0;
        for (int i : part.block(b)) {
            sum += f[i] * space.mass(i);
            mass += space.mass(i);
        }
        const Complex mean = sum / mass;
        for (int i : part.block(b))
            if (std::abs(f[i] - mean) > bound) return false;
    }
    return true;
}

inline MFunc constant_function(int n, Complex value) {
    return MFunc::Constant(n, value);
}

}  // namespace wctlab
