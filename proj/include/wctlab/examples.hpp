// Four worked examples of conditional-expectation geometry, discretized so
// every property of the library can be checked on them exactly.
//
//   3.1  circle shift by 1/n: the invariant algebra's blocks are the n-point
//        orbits, E is the orbit average.
//   3.2  unit square, E integrates out the second coordinate; u = y^{x/8},
//        w = sqrt((4+x) y) have closed-form conditional moments.
//   3.3  half shift on [0,1): blocks pair x with x + 1/2, u = sqrt(x), w = 1.
//   3.4  natural numbers with geometric masses p q^{x-1}; blocks are the
//        multiples of 3 versus the rest, so E(f) takes two values given by
//        ratios of geometric series.
//
// Each factory returns the instance plus a report.  Reports record computed
// values next to the closed forms; where a commonly quoted claim disagrees
// with the computation (the inequality direction in 3.2/3.3, one closed-form
// variant in 3.4) the report carries both numbers and asserts neither.

#pragma once

#include "wctlab/generator.hpp"
#include "wctlab/spectrum.hpp"
#include "wctlab/wct.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace wctlab {

using RealSampler = std::function<Complex(double)>;
using IndexSampler = std::function<Complex(long)>;

// ---------------------------------------------------------------------------
// 3.1  Orbit averaging under the shift x -> x + 1/n (mod 1).

struct OrbitAverageExample {
    WCTInstance instance;
    int n = 0;
    int cells = 0;
    int trials = 0;
    bool unit_preserved = false;      // E(1) = 1
    bool envelope_holds = false;      // |f| <= n E(|f|) entrywise, random non-negative f
    double max_envelope_ratio = 0.0;  // max |f_i| / (n E(|f|)_i) observed
    double operator_norm = 0.0;       // closed-form norm of M_w E M_u
};

/// Grid of n*cells equal cells on [0,1]; blocks are the shift orbits
/// {k, k + cells, ...} of size n; u and w are sampled at cell midpoints
/// (constant 1 when no sampler is given).
inline OrbitAverageExample example_3_1(int n, int cells, const RealSampler& u_sampler = {},
                                       const RealSampler& w_sampler = {},
                                       std::uint64_t seed = 1, int trials = 100) {
    if (n < 2) throw std::invalid_argument("example_3_1: n must be >= 2");
    if (cells < 1) throw std::invalid_argument("example_3_1: cells must be >= 1");
    const int N = n * cells;

    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(cells));
    for (int k = 0; k < cells; ++k)
        for (int j = 0; j < n; ++j) blocks[static_cast<std::size_t>(k)].push_back(k + j * cells);

    MFunc u(N), w(N);
    for (int i = 0; i < N; ++i) {
        const double x = (i + 0.5) / N;
        u[i] = u_sampler ? u_sampler(x) : Complex{1.0, 0.0};
        w[i] = w_sampler ? w_sampler(x) : Complex{1.0, 0.0};
    }

    OrbitAverageExample ex{build(FiniteMeasureSpace(Eigen::VectorXd::Constant(N, 1.0 / N)),
                                 Partition(std::move(blocks), N), std::move(u), std::move(w))};
    ex.n = n;
    ex.cells = cells;
    ex.trials = trials;

    const MFunc ones = constant_function(N, {1.0, 0.0});
    ex.unit_preserved =
        (cond_exp(ones, ex.instance.space, ex.instance.part) - ones).cwiseAbs().maxCoeff() == 0.0;

    Rng rng(seed);
    ex.envelope_holds = true;
    for (int trial = 0; trial < trials; ++trial) {
        MFunc f(N);
        for (int i = 0; i < N; ++i) f[i] = Complex{rng.u01(), 0.0};
        const MFunc ef = cond_exp(f, ex.instance.space, ex.instance.part);
        for (int i = 0; i < N; ++i) {
            const double ratio = std::abs(f[i]) / (n * ef[i].real());
            ex.max_envelope_ratio = std::max(ex.max_envelope_ratio, ratio);
            if (ratio > 1.0 + 1e-12) ex.envelope_holds = false;
        }
    }
    ex.operator_norm = norm_formula(ex.instance);
    return ex;
}

// ---------------------------------------------------------------------------
// 3.2  Unit square, expectation over the second coordinate.

struct ProductSpaceExample {
    WCTInstance instance;
    int grid = 0;
    double max_err_exp_u2 = 0.0;   // computed E|u|^2 vs 4/(4+x), per row
    double max_err_exp_w2 = 0.0;   // vs (4+x)/2
    double max_err_exp_uw2 = 0.0;  // |E(uw)|^2 vs 64(4+x)/(x+12)^2
    double max_err_product = 0.0;  // E|u|^2 E|w|^2 vs the constant 2
    int rows_gap_positive = 0;
    int rows_gap_negative = 0;
    double min_gap = 0.0;
    double max_gap = 0.0;
    double cauchy_schwarz_defect = 0.0;    // max(0, -min_gap) / scale
    bool gap_nonpositive_everywhere = false;  // the reversed-inequality claim under test
    double exp_uw_modulus_min = 0.0;
    double exp_uw_modulus_max = 0.0;
    double sigma_value_if_equality = 0.0;  // sqrt(2): nonzero spectrum if the gap were 0
};

/// grid x grid midpoint cells on the unit square; blocks are rows of
/// constant x; u = y^{x/8}, w = sqrt((4+x) y).
inline ProductSpaceExample example_3_2(int grid) {
    if (grid < 2) throw std::invalid_argument("example_3_2: grid must be >= 2");
    const int N = grid * grid;

    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(grid));
    MFunc u(N), w(N);
    for (int ix = 0; ix < grid; ++ix) {
        const double x = (ix + 0.5) / grid;
        for (int iy = 0; iy < grid; ++iy) {
            const int i = ix * grid + iy;
            const double y = (iy + 0.5) / grid;
            blocks[static_cast<std::size_t>(ix)].push_back(i);
            u[i] = Complex{std::pow(y, x / 8.0), 0.0};
            w[i] = Complex{std::sqrt((4.0 + x) * y), 0.0};
        }
    }

    ProductSpaceExample ex{build(FiniteMeasureSpace(Eigen::VectorXd::Constant(N, 1.0 / N)),
                                 Partition(std::move(blocks), N), std::move(u), std::move(w))};
    ex.grid = grid;

    ex.min_gap = std::numeric_limits<double>::infinity();
    ex.max_gap = -std::numeric_limits<double>::infinity();
    ex.exp_uw_modulus_min = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (int b = 0; b < grid; ++b) {
        const double x = (b + 0.5) / grid;
        const double eu2 = ex.instance.exp_u2_block[b];
        const double ew2 = ex.instance.exp_w2_block[b];
        const double euw2 = std::norm(ex.instance.exp_uw_block[b]);
        ex.max_err_exp_u2 = std::max(ex.max_err_exp_u2, std::abs(eu2 - 4.0 / (4.0 + x)));
        ex.max_err_exp_w2 = std::max(ex.max_err_exp_w2, std::abs(ew2 - (4.0 + x) / 2.0));
        ex.max_err_exp_uw2 = std::max(
            ex.max_err_exp_uw2, std::abs(euw2 - 64.0 * (4.0 + x) / ((x + 12.0) * (x + 12.0))));
        ex.max_err_product = std::max(ex.max_err_product, std::abs(eu2 * ew2 - 2.0));
        const double gap = eu2 * ew2 - euw2;
        ex.min_gap = std::min(ex.min_gap, gap);
        ex.max_gap = std::max(ex.max_gap, gap);
        if (gap > 0.0) ++ex.rows_gap_positive;
        if (gap < 0.0) ++ex.rows_gap_negative;
        scale = std::max(scale, eu2 * ew2);
        const double mod = std::abs(ex.instance.exp_uw_block[b]);
        ex.exp_uw_modulus_min = std::min(ex.exp_uw_modulus_min, mod);
        ex.exp_uw_modulus_max = std::max(ex.exp_uw_modulus_max, mod);
    }
    ex.cauchy_schwarz_defect = std::max(0.0, -ex.min_gap) / scale;
    ex.gap_nonpositive_everywhere = ex.max_gap <= 0.0;
    ex.sigma_value_if_equality = std::sqrt(2.0);
    return ex;
}

// ---------------------------------------------------------------------------
// 3.3  Half shift on [0,1), u = sqrt(x), w = 1.

struct HalfShiftExample {
    WCTInstance instance;
    int grid = 0;
    double max_err_exp_u2 = 0.0;  // computed E|u|^2 vs x + 1/4 on the first half
    bool block_values_strictly_increasing = false;
    bool block_values_distinct = false;  // at the default merge tolerance
    double min_gap = 0.0;
    double max_gap = 0.0;
    double cauchy_schwarz_defect = 0.0;
    bool gap_nonpositive_everywhere = false;  // the reversed-inequality claim under test
    std::vector<Complex> sigma_p;
};

/// grid equal cells on [0,1); block k pairs cell k with cell k + grid/2.
inline HalfShiftExample example_3_3(int grid) {
    if (grid < 2 || grid % 2 != 0)
        throw std::invalid_argument("example_3_3: grid must be even and >= 2");
    const int N = grid;
    const int half = grid / 2;

    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(half));
    MFunc u(N), w(N);
    for (int i = 0; i < N; ++i) {
        const double x = (i + 0.5) / N;
        u[i] = Complex{std::sqrt(x), 0.0};
        w[i] = Complex{1.0, 0.0};
        blocks[static_cast<std::size_t>(i % half)].push_back(i);
    }

    HalfShiftExample ex{build(FiniteMeasureSpace(Eigen::VectorXd::Constant(N, 1.0 / N)),
                              Partition(std::move(blocks), N), std::move(u), std::move(w))};
    ex.grid = grid;

    ex.min_gap = std::numeric_limits<double>::infinity();
    ex.max_gap = -std::numeric_limits<double>::infinity();
    ex.block_values_strictly_increasing = true;
    double scale = 1.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < half; ++b) {
        const double x = (b + 0.5) / N;
        const double eu2 = ex.instance.exp_u2_block[b];
        ex.max_err_exp_u2 = std::max(ex.max_err_exp_u2, std::abs(eu2 - (x + 0.25)));
        const double value = ex.instance.exp_uw_block[b].real();
        if (!(value > prev)) ex.block_values_strictly_increasing = false;
        prev = value;
        const double gap = eu2 * ex.instance.exp_w2_block[b] - std::norm(ex.instance.exp_uw_block[b]);
        ex.min_gap = std::min(ex.min_gap, gap);
        ex.max_gap = std::max(ex.max_gap, gap);
        scale = std::max(scale, eu2 * ex.instance.exp_w2_block[b]);
    }
    ex.cauchy_schwarz_defect = std::max(0.0, -ex.min_gap) / scale;
    ex.gap_nonpositive_everywhere = ex.max_gap <= 0.0;
    ex.sigma_p = point_spectrum(ex.instance);
    // 0 always belongs (rank = grid/2 < grid), so distinct block values show
    // up as |sigma_p| = half + 1.
    ex.block_values_distinct = static_cast<int>(ex.sigma_p.size()) == half + 1;
    return ex;
}

// ---------------------------------------------------------------------------
// 3.4  Geometric masses on {1..cutoff}, blocks: multiples of 3 vs the rest.

struct GeometricSpaceExample {
    WCTInstance instance;
    double q = 0.0;
    int cutoff = 0;
    bool default_samplers = false;  // u(x) = x, w = 1
    Complex alpha1_computed{};      // E(uw) on the multiples-of-3 block
    Complex alpha2_computed{};      // E(uw) on the complement
    Complex alpha1_series{};        // truncated-series ratio, independent summation
    Complex alpha2_series{};
    Complex alpha1_series_w2n{};    // variant with w sampled at 2n instead of 3n;
                                    // equals alpha1_series whenever w is constant
    double alpha1_closed_form = 0.0;  // 3/(1-q^3), for u(x) = x, w = 1
    double alpha2_closed_form = 0.0;  // (1+q^6-3q^4+4q^3-3q^2) / ((1-q)(1-q^2)(1-q^3))
    double err_alpha1 = 0.0;          // |computed - series|
    double err_alpha2 = 0.0;
    double err_alpha1_closed = 0.0;  // |series - closed form| (default samplers only)
    double err_alpha2_closed = 0.0;
    double tail_mass = 0.0;  // q^cutoff, the truncated mass
    std::vector<Complex> sigma_p;
};

/// Truncated space {1..cutoff} with masses (1-q) q^{x-1}, not renormalized;
/// blocks are the multiples of 3 within the cutoff versus the rest.
inline GeometricSpaceExample example_3_4(double q, int cutoff,
                                         const IndexSampler& u_sampler = {},
                                         const IndexSampler& w_sampler = {}) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("example_3_4: need 0 < q < 1");
    if (cutoff < 3) throw std::invalid_argument("example_3_4: cutoff must be >= 3");

    const double p = 1.0 - q;
    Eigen::VectorXd masses(cutoff);
    MFunc u(cutoff), w(cutoff);
    std::vector<std::vector<int>> blocks(2);
    for (int i = 0; i < cutoff; ++i) {
        const long x = i + 1;
        masses[i] = p * std::pow(q, static_cast<double>(x - 1));
        u[i] = u_sampler ? u_sampler(x) : Complex{static_cast<double>(x), 0.0};
        w[i] = w_sampler ? w_sampler(x) : Complex{1.0, 0.0};
        blocks[x % 3 == 0 ? 0 : 1].push_back(i);
    }

    GeometricSpaceExample ex{build(FiniteMeasureSpace(std::move(masses)),
                                   Partition(std::move(blocks), cutoff), std::move(u),
                                   std::move(w))};
    ex.q = q;
    ex.cutoff = cutoff;
    ex.default_samplers = !u_sampler && !w_sampler;

    // Independent truncated-series oracle: plain sums over x, the common
    // factor p cancels in each ratio.
    const auto sample_u = [&](long x) { return u_sampler ? u_sampler(x) : Complex{double(x), 0.0}; };
    const auto sample_w = [&](long x) { return w_sampler ? w_sampler(x) : Complex{1.0, 0.0}; };
    Complex top1{0.0, 0.0}, top1_w2n{0.0, 0.0}, top_all{0.0, 0.0};
    double bot1 = 0.0, bot_all = 0.0;
    for (long x = 1; x <= cutoff; ++x) {
        const double weight = std::pow(q, static_cast<double>(x - 1));
        const Complex fx = sample_u(x) * sample_w(x);
        top_all += fx * weight;
        bot_all += weight;
        if (x % 3 == 0) {
            top1 += fx * weight;
            top1_w2n += sample_u(x) * sample_w(2 * (x / 3)) * weight;
            bot1 += weight;
        }
    }
    ex.alpha1_series = top1 / bot1;
    ex.alpha1_series_w2n = top1_w2n / bot1;
    ex.alpha2_series = (top_all - top1) / (bot_all - bot1);

    ex.alpha1_computed = ex.instance.exp_uw_block[0];
    ex.alpha2_computed = ex.instance.exp_uw_block[1];
    ex.err_alpha1 = std::abs(ex.alpha1_computed - ex.alpha1_series);
    ex.err_alpha2 = std::abs(ex.alpha2_computed - ex.alpha2_series);

    const double q2 = q * q, q3 = q2 * q;
    ex.alpha1_closed_form = 3.0 / (1.0 - q3);
    ex.alpha2_closed_form = (1.0 + q3 * q3 - 3.0 * q2 * q2 + 4.0 * q3 - 3.0 * q2) /
                            ((1.0 - q) * (1.0 - q2) * (1.0 - q3));
    if (ex.default_samplers) {
        ex.err_alpha1_closed = std::abs(ex.alpha1_series - Complex{ex.alpha1_closed_form, 0.0});
        ex.err_alpha2_closed = std::abs(ex.alpha2_series - Complex{ex.alpha2_closed_form, 0.0});
    }
    ex.tail_mass = std::pow(q, static_cast<double>(cutoff));
    ex.sigma_p = point_spectrum(ex.instance);
    return ex;
}

}  // namespace wctlab
