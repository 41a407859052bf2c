// Theorem suite for weighted conditional-type operators: normality and
// p-hyponormality predicates, the Holder-equality locus, and seeded
// falsification campaigns over random instances.
//
// The verified claims, by id:
//   2.1  the generalized Aluthge transform Ttil is normal (closed and
//        numeric forms both)
//   2.2  T is p-hyponormal iff T is normal
//   2.3  invertible T is normal
//   2.4  |Ttil| = |Ttil*|
//   2.5  under p-hyponormality, |Ttil| = |T|^r
//   2.6  under p-hyponormality, |E(uw)|^2 = E(|u|^2) E(|w|^2) on S(E(u))
//   2.8  under the Holder equality everywhere, sigma_p = sigma_jp
//
// A failed check is evidence, not a crash: the offending instance is dumped
// in the shared file format with its seed, and campaigns keep running.

#pragma once

#include "wctlab/generator.hpp"
#include "wctlab/io.hpp"
#include "wctlab/records.hpp"
#include "wctlab/spectrum.hpp"
#include "wctlab/wct.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wctlab {

/// Normality residuals above this gate count as decisively non-normal when
/// theorem 2.2 cross-examines a p-hyponormality verdict (and vice versa).
/// The band between psd_tol and this gate absorbs the square-root
/// sensitivity of fractional powers near the kernel.
inline constexpr double kThm22NormalityGate = 1e-6;

struct ToleranceParams {
    double residual_rel = 1e-8;
    double psd_tol = 1e-9;
    double rank_tol_rel = 1e-12;
    double merge_tol = 1e-10;

    void validate() const {
        if (!(residual_rel > 0.0) || !(psd_tol > 0.0) || !(rank_tol_rel > 0.0) ||
            !(merge_tol > 0.0))
            throw std::invalid_argument("ToleranceParams: all tolerances must be > 0");
    }

    double scaled_merge_tol(const WCTInstance& inst) const {
        double m = 0.0;
        for (int b = 0; b < inst.blocks(); ++b)
            m = std::max(m, std::abs(inst.exp_uw_block[b]));
        return merge_tol * (1.0 + m);
    }
};

enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "not-applicable";
    }
}

/// One named residual with its tolerance; an entry passes iff value <= tol.
/// Entries with tol = inf are informational.
struct NamedResidual {
    std::string name;
    double value;
    double tol;
};

struct TheoremReport {
    std::string theorem;
    std::uint64_t seed = 0;
    int n = 0;
    int blocks = 0;
    std::vector<NamedResidual> residuals;
    Verdict verdict = Verdict::pass;
    std::string reason;                      // set for not-applicable
    std::vector<Complex> sigma_p, sigma_jp;  // filled by the 2.8 check

    /// Reports are self-contained: the verdict follows from the entries.
    static Verdict recompute(const std::vector<NamedResidual>& rs) {
        for (const NamedResidual& r : rs)
            if (!(r.value <= r.tol)) return Verdict::fail;
        return Verdict::pass;
    }

    void finalize() { verdict = recompute(residuals); }
};

namespace detail {

inline std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline double max_abs_eig(const Eigen::VectorXd& vals) {
    if (vals.size() == 0) return 0.0;
    return std::max(std::abs(vals[0]), std::abs(vals[vals.size() - 1]));
}

// Power of an eigendecomposition with the kernel cutoff of hermitian.hpp.
inline Eigen::MatrixXcd clamped_power(const HermitianEig& e, double p, double rank_tol_rel) {
    const double cut = rank_tol_rel * std::max(e.values[0], 0.0);
    Eigen::VectorXd powered(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        powered[i] = (e.values[i] <= cut) ? 0.0 : std::pow(e.values[i], p);
    return e.frame_vectors * powered.asDiagonal() * e.frame_vectors.adjoint();
}

}  // namespace detail

struct HyponormalityCheck {
    double p = 1.0;
    double psd_defect = 0.0;  // max(0, -min eig) / max(1, max |eig|) of (T*T)^p - (TT*)^p
    bool hyponormal = true;
};

/// Shared dense analysis of T*T versus TT*: the normality residual and the
/// p-hyponormality defects for a list of exponents, from one pass of
/// eigendecompositions in the frame.
struct SymmetryAnalysis {
    double norm_T = 0.0;            // ||T||
    double normality_residual = 0.0;  // ||T*T - TT*|| / (1 + ||T||^2)
    std::vector<HyponormalityCheck> hypo;
};

inline SymmetryAnalysis analyze_symmetry(const LinOperator& T, const std::vector<double>& p_list,
                                         const ToleranceParams& tol = {}) {
    SymmetryAnalysis out;
    const Eigen::MatrixXcd Tf = to_frame(T);
    const Eigen::MatrixXcd H1 = Tf.adjoint() * Tf;
    const Eigen::MatrixXcd H2 = Tf * Tf.adjoint();

    bool need_vectors = false;
    for (double p : p_list)
        if (p != 1.0) need_vectors = true;

    const HermitianEig e1 = detail::jacobi_hermitian(H1, need_vectors);
    const double norm2 = std::max(e1.values[0], 0.0);
    out.norm_T = std::sqrt(norm2);

    const HermitianEig eC = detail::jacobi_hermitian(H1 - H2, false);
    out.normality_residual = detail::max_abs_eig(eC.values) / (1.0 + norm2);

    HermitianEig e2;
    if (need_vectors) e2 = detail::jacobi_hermitian(H2, true);

    for (double p : p_list) {
        if (!(p > 0.0)) throw std::invalid_argument("analyze_symmetry: exponents must be > 0");
        HyponormalityCheck hc;
        hc.p = p;
        Eigen::VectorXd vals;
        if (p == 1.0) {
            vals = eC.values;
        } else {
            const Eigen::MatrixXcd D = detail::clamped_power(e1, p, tol.rank_tol_rel) -
                                       detail::clamped_power(e2, p, tol.rank_tol_rel);
            vals = detail::jacobi_hermitian(D, false).values;
        }
        const double min_eig = vals[vals.size() - 1];
        hc.psd_defect = std::max(0.0, -min_eig) / std::max(1.0, detail::max_abs_eig(vals));
        hc.hyponormal = hc.psd_defect <= tol.psd_tol;
        out.hypo.push_back(hc);
    }
    return out;
}

struct NormalityCheck {
    double residual = 0.0;
    bool normal = true;
};

/// ||A*A - AA*|| / (1 + ||A||^2) against tol.
inline NormalityCheck check_normal(const LinOperator& A, double tol) {
    const SymmetryAnalysis an = analyze_symmetry(A, {});
    return NormalityCheck{an.normality_residual, an.normality_residual <= tol};
}

inline HyponormalityCheck check_p_hyponormal(const LinOperator& A, double p,
                                             const ToleranceParams& tol = {}) {
    return analyze_symmetry(A, {p}, tol).hypo.front();
}

struct RT {
    double r;
    double t;
};

/// Default t grid per r: {0, r/3, r/2, r}.
inline std::vector<RT> rt_grid(const std::vector<double>& r_list,
                               const std::vector<double>& t_list = {}) {
    std::vector<RT> grid;
    for (double r : r_list) {
        if (t_list.empty()) {
            grid.push_back({r, 0.0});
            grid.push_back({r, r / 3.0});
            grid.push_back({r, r / 2.0});
            grid.push_back({r, r});
        } else {
            for (double t : t_list)
                if (t >= 0.0 && t <= r) grid.push_back({r, t});
        }
    }
    return grid;
}

namespace detail {

inline void instance_digest(TheoremReport& rep, const WCTInstance& inst, std::uint64_t seed) {
    rep.seed = seed;
    rep.n = inst.size();
    rep.blocks = inst.blocks();
}

inline std::string rt_suffix(const RT& rt) {
    return "[r=" + fmt_g(rt.r) + ",t=" + fmt_g(rt.t) + "]";
}

}  // namespace detail

/// Theorem 2.1: the generalized Aluthge transform is normal, both the
/// closed form and the numeric |T|^t U |T|^{r-t}.
inline TheoremReport check_thm_2_1(const WCTInstance& inst, const std::vector<RT>& grid,
                                   const ToleranceParams& tol = {}, std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.1";
    detail::instance_digest(rep, inst, seed);
    const PolarData pd = polar_data(as_operator(inst), tol.rank_tol_rel);
    for (const RT& rt : grid) {
        const NormalityCheck closed = check_normal(gen_aluthge_closed(inst, rt.r, rt.t), tol.residual_rel);
        const NormalityCheck numeric =
            check_normal(gen_aluthge_numeric(pd, rt.r, rt.t), tol.residual_rel);
        rep.residuals.push_back(
            {"normality_closed" + detail::rt_suffix(rt), closed.residual, tol.residual_rel});
        rep.residuals.push_back(
            {"normality_numeric" + detail::rt_suffix(rt), numeric.residual, tol.residual_rel});
    }
    rep.finalize();
    return rep;
}

/// Theorem 2.2: p-hyponormal iff normal.  Both directions are tested with a
/// guard band: a clear counterexample is hyponormal at psd_tol yet has
/// normality residual above kThm22NormalityGate, or is normal at psd_tol yet
/// has a PSD defect above the gate.
inline TheoremReport check_thm_2_2(const WCTInstance& inst, const std::vector<double>& p_list,
                                   const ToleranceParams& tol = {}, std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.2";
    detail::instance_digest(rep, inst, seed);
    const SymmetryAnalysis an = analyze_symmetry(as_operator(inst), p_list, tol);
    rep.residuals.push_back({"normality_residual", an.normality_residual,
                             std::numeric_limits<double>::infinity()});
    for (const HyponormalityCheck& hc : an.hypo) {
        const std::string suffix = "[p=" + detail::fmt_g(hc.p) + "]";
        rep.residuals.push_back(
            {"psd_defect" + suffix, hc.psd_defect, std::numeric_limits<double>::infinity()});
        rep.residuals.push_back({"normality_if_hyponormal" + suffix,
                                 hc.hyponormal ? an.normality_residual : 0.0,
                                 kThm22NormalityGate});
        rep.residuals.push_back({"hyponormality_if_normal" + suffix,
                                 an.normality_residual <= tol.psd_tol ? hc.psd_defect : 0.0,
                                 kThm22NormalityGate});
    }
    rep.finalize();
    return rep;
}

/// Theorem 2.3: invertible implies normal; rank-deficient instances are
/// not applicable.
inline TheoremReport check_thm_2_3(const WCTInstance& inst, const ToleranceParams& tol = {},
                                   std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.3";
    detail::instance_digest(rep, inst, seed);
    if (!is_invertible(inst, tol.rank_tol_rel)) {
        rep.verdict = Verdict::not_applicable;
        rep.reason = "instance is not invertible";
        return rep;
    }
    const NormalityCheck nc = check_normal(as_operator(inst), tol.residual_rel);
    rep.residuals.push_back({"normality_residual", nc.residual, tol.residual_rel});
    rep.finalize();
    return rep;
}

/// Lemma 2.4: |Ttil| = |Ttil*| for every admissible (r, t).
inline TheoremReport check_lemma_2_4(const WCTInstance& inst, const std::vector<RT>& grid,
                                     const ToleranceParams& tol = {}, std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.4";
    detail::instance_digest(rep, inst, seed);
    for (const RT& rt : grid) {
        const LinOperator Ttil = gen_aluthge_closed(inst, rt.r, rt.t);
        const PolarData fwd = polar_data(Ttil, tol.rank_tol_rel);
        const PolarData bwd = polar_data(adjoint(Ttil), tol.rank_tol_rel);
        const double norm_Ttil = fwd.sigma.size() ? fwd.sigma[0] : 0.0;
        const double res =
            frobenius_norm(fwd.absolute() - bwd.absolute()) / (1.0 + norm_Ttil);
        rep.residuals.push_back({"abs_vs_abs_adjoint" + detail::rt_suffix(rt), res, tol.residual_rel});
    }
    rep.finalize();
    return rep;
}

/// Theorem 2.5: under p-hyponormality, |Ttil| = |T|^r.
inline TheoremReport check_thm_2_5(const WCTInstance& inst, const std::vector<RT>& grid,
                                   const std::vector<double>& p_list,
                                   const ToleranceParams& tol = {}, std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.5";
    detail::instance_digest(rep, inst, seed);
    const LinOperator T = as_operator(inst);
    const SymmetryAnalysis an = analyze_symmetry(T, p_list, tol);
    bool hypo = false;
    for (const HyponormalityCheck& hc : an.hypo) hypo = hypo || hc.hyponormal;
    if (!hypo) {
        rep.verdict = Verdict::not_applicable;
        rep.reason = "instance is not p-hyponormal";
        return rep;
    }
    const PolarData pd = polar_data(T, tol.rank_tol_rel);
    for (const RT& rt : grid) {
        const LinOperator abs_Ttil = polar(gen_aluthge_closed(inst, rt.r, rt.t), tol.rank_tol_rel).absolute;
        const double scale = 1.0 + std::pow(an.norm_T, rt.r);
        const double res = frobenius_norm(abs_Ttil - pd.absolute_power(rt.r)) / scale;
        rep.residuals.push_back({"abs_gen_vs_abs_T_pow_r" + detail::rt_suffix(rt), res, tol.residual_rel});
    }
    rep.finalize();
    return rep;
}

inline std::vector<bool> support_of_exp_u(const WCTInstance& inst,
                                          double zero_tol = kDefaultZeroTol) {
    double m = 0.0;
    for (int b = 0; b < inst.blocks(); ++b) m = std::max(m, std::abs(inst.exp_u_block[b]));
    std::vector<bool> in(static_cast<std::size_t>(inst.blocks()));
    for (int b = 0; b < inst.blocks(); ++b)
        in[static_cast<std::size_t>(b)] = std::abs(inst.exp_u_block[b]) > zero_tol * m;
    return in;
}

/// Theorem 2.6 / Corollary 2.7: the Cauchy-Schwarz bound holds on every
/// instance, and under p-hyponormality the gap vanishes on S(E(u)).
inline TheoremReport check_thm_2_6(const WCTInstance& inst, const std::vector<double>& p_list,
                                   const ToleranceParams& tol = {}, std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.6";
    detail::instance_digest(rep, inst, seed);

    const Eigen::VectorXd gap = holder_gap_blocks(inst);
    double scale = 1.0;
    for (int b = 0; b < inst.blocks(); ++b)
        scale = std::max(scale, inst.exp_u2_block[b] * inst.exp_w2_block[b]);
    const double cs_defect = std::max(0.0, -gap.minCoeff()) / scale;
    rep.residuals.push_back({"cauchy_schwarz_defect", cs_defect, 1e-12});

    const SymmetryAnalysis an = analyze_symmetry(as_operator(inst), p_list, tol);
    bool hypo = false;
    for (const HyponormalityCheck& hc : an.hypo) hypo = hypo || hc.hyponormal;
    if (!hypo) {
        rep.verdict = TheoremReport::recompute(rep.residuals) == Verdict::fail
                          ? Verdict::fail
                          : Verdict::not_applicable;
        rep.reason = "instance is not p-hyponormal; only the Cauchy-Schwarz bound applies";
        return rep;
    }

    const std::vector<bool> in_SEu = support_of_exp_u(inst);
    double worst = 0.0;
    for (int b = 0; b < inst.blocks(); ++b)
        if (in_SEu[static_cast<std::size_t>(b)]) worst = std::max(worst, std::abs(gap[b]));
    rep.residuals.push_back({"holder_gap_on_SEu", worst / scale, tol.residual_rel});
    rep.finalize();
    return rep;
}

/// Theorem 2.8: with the Holder equality everywhere, sigma_p = sigma_jp.
/// Reports both spectra either way.
inline TheoremReport check_thm_2_8(const WCTInstance& inst, const ToleranceParams& tol = {},
                                   std::uint64_t seed = 0) {
    TheoremReport rep;
    rep.theorem = "2.8";
    detail::instance_digest(rep, inst, seed);

    const Eigen::VectorXd gap = holder_gap_blocks(inst);
    double scale = 1.0;
    for (int b = 0; b < inst.blocks(); ++b)
        scale = std::max(scale, inst.exp_u2_block[b] * inst.exp_w2_block[b]);
    double max_gap = 0.0;
    for (int b = 0; b < inst.blocks(); ++b) max_gap = std::max(max_gap, std::abs(gap[b]));

    const double merge = tol.scaled_merge_tol(inst);
    rep.sigma_p = point_spectrum(inst, merge, tol.rank_tol_rel);
    rep.sigma_jp = joint_point_spectrum(inst, tol.residual_rel, merge);
    rep.residuals.push_back(
        {"holder_gap_max", max_gap / scale, std::numeric_limits<double>::infinity()});

    if (max_gap > tol.residual_rel * scale) {
        rep.verdict = Verdict::not_applicable;
        rep.reason = "Holder equality does not hold on this instance";
        return rep;
    }
    rep.residuals.push_back(
        {"sigma_p_minus_sigma_jp",
         static_cast<double>(rep.sigma_p.size()) - static_cast<double>(rep.sigma_jp.size()), 0.0});
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignParams {
    GeneratorConfig gen;
    std::vector<std::string> suite = {"2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.8"};
    std::vector<double> p_list = {0.5, 1.0};
    std::vector<double> r_list = {0.75, 1.0, 2.0};
    std::vector<double> t_list = {};  // empty: default {0, r/3, r/2, r} per r
    ToleranceParams tol;
    std::string dump_dir;  // counterexample directory; empty = current directory
};

struct TheoremTally {
    long pass = 0;
    long fail = 0;
    long not_applicable = 0;
    double max_residual = 0.0;  // over checked (non-informational) entries
};

struct CampaignSummary {
    long trials = 0;
    long failures = 0;
    std::map<std::string, TheoremTally> per_theorem;
    std::vector<std::string> counterexamples;
    std::vector<std::string> dump_errors;
};

inline Record report_record(const TheoremReport& rep) {
    Record residuals, tolerances;
    for (const NamedResidual& r : rep.residuals) {
        residuals.field(r.name, r.value);
        tolerances.field(r.name, r.tol);
    }
    Record rec;
    rec.field("record", "theorem")
        .field("id", rep.theorem)
        .field("seed", rep.seed)
        .field("n", rep.n)
        .field("blocks", rep.blocks)
        .field("residuals", residuals)
        .field("tolerances", tolerances)
        .field("verdict", to_string(rep.verdict));
    if (!rep.reason.empty()) rec.field("reason", rep.reason);
    if (!rep.sigma_p.empty() || !rep.sigma_jp.empty()) {
        rec.field("sigma_p", rep.sigma_p);
        rec.field("sigma_jp", rep.sigma_jp);
    }
    return rec;
}

namespace detail {

inline TheoremReport run_check(const std::string& id, const WCTInstance& inst,
                               const CampaignParams& params, const std::vector<RT>& grid,
                               std::uint64_t seed) {
    if (id == "2.1") return check_thm_2_1(inst, grid, params.tol, seed);
    if (id == "2.2") return check_thm_2_2(inst, params.p_list, params.tol, seed);
    if (id == "2.3") return check_thm_2_3(inst, params.tol, seed);
    if (id == "2.4") return check_lemma_2_4(inst, grid, params.tol, seed);
    if (id == "2.5") return check_thm_2_5(inst, grid, params.p_list, params.tol, seed);
    if (id == "2.6") return check_thm_2_6(inst, params.p_list, params.tol, seed);
    if (id == "2.8") return check_thm_2_8(inst, params.tol, seed);
    throw std::invalid_argument("unknown theorem id in suite: " + id);
}

inline void dump_counterexample(const WCTInstance& inst, const TheoremReport& rep,
                                const std::string& dir, CampaignSummary& summary) {
    const std::string stem = (dir.empty() ? std::string() : dir + "/") + "counterexample_" +
                             rep.theorem + "_" + std::to_string(rep.seed);
    try {
        write_instance_file(inst, stem + ".instance.json");
        std::ofstream side(stem + ".report.json");
        if (!side) throw std::runtime_error("cannot open " + stem + ".report.json");
        side << report_record(rep).line();
        summary.counterexamples.push_back(stem + ".instance.json");
    } catch (const std::exception& e) {
        summary.dump_errors.push_back(e.what());
    }
}

}  // namespace detail

/// Runs the suite over `trials` seeded instances.  Deterministic in
/// (params, trials): trial i uses seed derive_seed(params.gen.seed, i).
/// Each report is handed to `sink` in trial order; failures dump the
/// instance plus a sidecar report and the campaign continues.
inline CampaignSummary run_campaign(const CampaignParams& params, long trials,
                                    const std::function<void(const TheoremReport&)>& sink = {}) {
    params.gen.validate();
    params.tol.validate();
    if (trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");
    for (const std::string& id : params.suite)
        if (id != "2.1" && id != "2.2" && id != "2.3" && id != "2.4" && id != "2.5" &&
            id != "2.6" && id != "2.8")
            throw std::invalid_argument("unknown theorem id in suite: " + id);

    const std::vector<RT> grid = rt_grid(params.r_list, params.t_list);
    CampaignSummary summary;
    summary.trials = trials;

    for (long trial = 0; trial < trials; ++trial) {
        GeneratorConfig cfg = params.gen;
        cfg.seed = derive_seed(params.gen.seed, static_cast<std::uint64_t>(trial));
        const WCTInstance inst = gen_instance(cfg);
        for (const std::string& id : params.suite) {
            TheoremReport rep = detail::run_check(id, inst, params, grid, cfg.seed);
            TheoremTally& tally = summary.per_theorem[id];
            switch (rep.verdict) {
                case Verdict::pass: ++tally.pass; break;
                case Verdict::fail: ++tally.fail; break;
                case Verdict::not_applicable: ++tally.not_applicable; break;
            }
            for (const NamedResidual& r : rep.residuals)
                if (std::isfinite(r.tol)) tally.max_residual = std::max(tally.max_residual, r.value);
            if (rep.verdict == Verdict::fail) {
                ++summary.failures;
                detail::dump_counterexample(inst, rep, params.dump_dir, summary);
            }
            if (sink) sink(rep);
        }
    }
    return summary;
}

inline Record summary_record(const CampaignSummary& summary) {
    Record per_theorem;
    for (const auto& [id, tally] : summary.per_theorem) {
        Record t;
        t.field("pass", tally.pass)
            .field("fail", tally.fail)
            .field("not_applicable", tally.not_applicable)
            .field("max_residual", tally.max_residual);
        per_theorem.field(id, t);
    }
    Record rec;
    rec.field("record", "summary")
        .field("trials", summary.trials)
        .field("failures", summary.failures)
        .field("per_theorem", per_theorem)
        .field("counterexamples", summary.counterexamples);
    if (!summary.dump_errors.empty()) rec.field("dump_errors", summary.dump_errors);
    return rec;
}

}  // namespace wctlab
