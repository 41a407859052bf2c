// Seeded instance generation for verification campaigns.
//
// The stream is fully pinned: a std::mt19937_64 engine (whose output
// sequence the standard specifies) drives hand-rolled uniform, log-uniform
// and Box-Muller normal draws, so a seed reproduces an instance exactly on
// any build of this library.

#pragma once

#include "wctlab/wct.hpp"

#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wctlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Per-trial seed derivation for campaigns: one splitmix64 scramble of the
/// master seed offset by the trial index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    return splitmix64(state);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on (0,1); never returns an endpoint.
    double u01() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(eng_() % span);
    }

    bool bernoulli(double p) { return u01() < p; }

    double normal() {
        const double radius = std::sqrt(-2.0 * std::log(u01()));
        return radius * std::cos(2.0 * std::numbers::pi * u01());
    }

    Complex complex_normal() { return Complex(normal(), normal()); }

private:
    std::mt19937_64 eng_;
};

enum class Family { generic, normal_family, singleton_blocks };

struct GeneratorConfig {
    std::uint64_t seed = 0;
    int n_min = 2;
    int n_max = 16;
    double mass_min = 0.1;
    double mass_max = 10.0;
    double zero_prob_u = 0.3;   // probability a block of u is zeroed
    double zero_prob_w = 0.3;
    Family family = Family::generic;

    void validate() const {
        if (n_min < 2 || n_max > 64 || n_min > n_max)
            throw std::invalid_argument("GeneratorConfig: need 2 <= n_min <= n_max <= 64");
        if (!(mass_min > 0.0) || mass_min > mass_max)
            throw std::invalid_argument("GeneratorConfig: need 0 < mass_min <= mass_max");
        if (zero_prob_u < 0.0 || zero_prob_u > 1.0 || zero_prob_w < 0.0 || zero_prob_w > 1.0)
            throw std::invalid_argument("GeneratorConfig: zeroing probabilities must be in [0,1]");
    }
};

namespace detail {

// Random partition: draw the block count, seed each block with one point of
// a shuffled index list, spread the rest uniformly.  Blocks are canonical
// (sorted within, ordered by first element) so dumps are reproducible.
inline Partition random_partition(Rng& rng, int n) {
    const int m = rng.uniform_int(1, n);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)],
                                              order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(m));
    for (int k = 0; k < n; ++k) {
        const int b = (k < m) ? k : rng.uniform_int(0, m - 1);
        blocks[static_cast<std::size_t>(b)].push_back(order[static_cast<std::size_t>(k)]);
    }
    for (auto& blk : blocks) std::sort(blk.begin(), blk.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return Partition(std::move(blocks), n);
}

}  // namespace detail

/// Deterministic function of cfg.seed.  The normal family draws
/// w = k conj(u) with k block-constant, which makes T exactly normal; the
/// singleton family uses the full algebra (E = identity).  Zeroed blocks
/// exercise the chi_S and chi_G support paths.
inline WCTInstance gen_instance(const GeneratorConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const int n = rng.uniform_int(cfg.n_min, cfg.n_max);

    Eigen::VectorXd masses(n);
    for (int i = 0; i < n; ++i) masses[i] = rng.log_uniform(cfg.mass_min, cfg.mass_max);
    FiniteMeasureSpace space(std::move(masses));

    Partition part = (cfg.family == Family::singleton_blocks)
                         ? Partition::singletons(n)
                         : detail::random_partition(rng, n);

    MFunc u = MFunc::Zero(n);
    for (int b = 0; b < part.block_count(); ++b) {
        if (rng.bernoulli(cfg.zero_prob_u)) continue;
        for (int i : part.block(b)) u[i] = rng.complex_normal();
    }

    MFunc w = MFunc::Zero(n);
    if (cfg.family == Family::normal_family) {
        for (int b = 0; b < part.block_count(); ++b) {
            const Complex k = rng.bernoulli(cfg.zero_prob_w) ? Complex{0.0, 0.0}
                                                             : rng.complex_normal();
            for (int i : part.block(b)) w[i] = k * std::conj(u[i]);
        }
    } else {
        for (int b = 0; b < part.block_count(); ++b) {
            if (rng.bernoulli(cfg.zero_prob_w)) continue;
            for (int i : part.block(b)) w[i] = rng.complex_normal();
        }
    }

    return build(std::move(space), std::move(part), std::move(u), std::move(w));
}

}  // namespace wctlab
