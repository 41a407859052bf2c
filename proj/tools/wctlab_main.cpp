// wctlab command-line driver.
//
// Subcommands:
//   verify    run theorem checks over seeded random instances
//   spectrum  point/joint spectra and Holder gaps of an instance file
//   example   rebuild one of the worked examples and report on it
//
// Output is a stream of one-line JSON records (numbers at 17 significant
// digits) plus a final summary record; identical inputs produce identical
// bytes.  Exit codes: 0 success, 1 check failure (counterexample written),
// 2 usage or input error, 3 I/O error.

#include "wctlab/wctlab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace wctlab;

std::string default_out_dir() {
    const char* env = std::getenv("WCTLAB_OUT_DIR");
    return env ? std::string(env) : std::string();
}

std::string resolve_in_out_dir(const std::string& path) {
    const std::string dir = default_out_dir();
    if (path.empty() || dir.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(dir) / path).string();
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct VerifyOptions {
    std::uint64_t seed = 0;
    long trials = 100;
    std::vector<double> p_list;
    std::vector<double> r_list;
    std::vector<double> t_list;
    std::string suite = "2.1,2.2,2.3,2.4,2.5,2.6,2.8";
    std::string family = "generic";
    std::string out_path;
    ToleranceParams tol;
};

int run_verify(const VerifyOptions& opt) {
    CampaignParams params;
    params.gen.seed = opt.seed;
    params.suite = split_commas(opt.suite);
    params.p_list = opt.p_list.empty() ? std::vector<double>{0.5, 1.0} : opt.p_list;
    params.r_list = opt.r_list.empty() ? std::vector<double>{0.75, 1.0, 2.0} : opt.r_list;
    params.t_list = opt.t_list;
    params.tol = opt.tol;
    params.dump_dir = default_out_dir();
    if (opt.family == "normal")
        params.gen.family = Family::normal_family;
    else if (opt.family == "singleton")
        params.gen.family = Family::singleton_blocks;

    for (double p : params.p_list)
        if (!(p > 0.0)) throw CLI::ValidationError("--p", "exponents must be > 0");
    for (double r : params.r_list)
        if (!(r > 0.0)) throw CLI::ValidationError("--r", "r must be > 0");
    for (double t : params.t_list)
        if (!(t >= 0.0)) throw CLI::ValidationError("--t", "t must be >= 0");
    if (rt_grid(params.r_list, params.t_list).empty())
        throw CLI::ValidationError("--t", "no admissible (r, t) pair: every t exceeds every r");

    std::ofstream file;
    const std::string out_path = resolve_in_out_dir(opt.out_path);
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot open " << out_path << " for writing\n";
            return 3;
        }
    }
    std::ostream& stream = out_path.empty() ? std::cout : file;

    Record tol_rec;
    tol_rec.field("residual_rel", params.tol.residual_rel)
        .field("psd_tol", params.tol.psd_tol)
        .field("rank_tol_rel", params.tol.rank_tol_rel)
        .field("merge_tol", params.tol.merge_tol);
    Record meta;
    meta.field("record", "meta")
        .field("tool", "wctlab verify")
        .field("seed", opt.seed)
        .field("trials", opt.trials)
        .field("suite", params.suite)
        .field("p", params.p_list)
        .field("r", params.r_list);
    if (params.t_list.empty())
        meta.field("t", std::vector<std::string>{"0", "r/3", "r/2", "r"});
    else
        meta.field("t", params.t_list);
    meta.field("family", opt.family).field("tolerances", tol_rec);
    stream << meta.line();

    const CampaignSummary summary = run_campaign(
        params, opt.trials, [&](const TheoremReport& rep) { stream << report_record(rep).line(); });
    stream << summary_record(summary).line();
    stream.flush();
    if (!stream) {
        std::cerr << "error: write failure on the report stream\n";
        return 3;
    }

    if (!out_path.empty()) {
        std::cout << "suite: " << opt.suite << "  trials: " << opt.trials << "\n";
        for (const auto& [id, tally] : summary.per_theorem)
            std::cout << "  " << id << ": pass " << tally.pass << ", fail " << tally.fail
                      << ", n/a " << tally.not_applicable << "\n";
        std::cout << (summary.failures ? "FAIL" : "OK") << " (" << summary.failures
                  << " failures)\n";
    }
    return summary.failures > 0 ? 1 : 0;
}

int run_spectrum(const std::string& input, const ToleranceParams& tol) {
    WCTInstance inst = [&] {
        try {
            return read_instance_file(input);
        } catch (const InstanceFormatError& e) {
            std::cerr << "error: " << input << ": " << e.what() << "\n";
            std::exit(2);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << input << ": " << e.what() << "\n";
            std::exit(2);
        }
    }();

    const double merge = tol.scaled_merge_tol(inst);
    const std::vector<Complex> sigma_p = point_spectrum(inst, merge, tol.rank_tol_rel);
    const std::vector<Complex> sigma_jp = joint_point_spectrum(inst, tol.residual_rel, merge);

    Record rec;
    rec.field("record", "spectrum")
        .field("n", inst.size())
        .field("blocks", inst.blocks())
        .field("rank", inst.structural_rank(tol.rank_tol_rel))
        .field("invertible", is_invertible(inst, tol.rank_tol_rel))
        .field("norm", norm_formula(inst))
        .field("sigma_p", sigma_p)
        .field("sigma_jp", sigma_jp)
        .field("merge_tol", merge);
    std::cout << rec.line();

    const Eigen::VectorXd gap = holder_gap_blocks(inst);
    for (int b = 0; b < inst.blocks(); ++b) {
        Record rec;
        rec.field("record", "holder_gap")
            .field("block", b + 1)
            .field("gap", gap[b])
            .field("exp_u2", inst.exp_u2_block[b])
            .field("exp_w2", inst.exp_w2_block[b])
            .field("exp_uw", inst.exp_uw_block[b])
            .field("in_S", static_cast<bool>(inst.in_S[static_cast<std::size_t>(b)]))
            .field("in_G", static_cast<bool>(inst.in_G[static_cast<std::size_t>(b)]));
        std::cout << rec.line();
    }

    const SymmetryAnalysis an = analyze_symmetry(as_operator(inst), {0.5, 1.0}, tol);
    Record verdicts;
    verdicts.field("record", "verdicts")
        .field("normality_residual", an.normality_residual)
        .field("normal", an.normality_residual <= tol.residual_rel)
        .field("normality_tol", tol.residual_rel);
    for (const HyponormalityCheck& hc : an.hypo) {
        verdicts.field("psd_defect[p=" + detail::fmt_g(hc.p) + "]", hc.psd_defect);
        verdicts.field("hyponormal[p=" + detail::fmt_g(hc.p) + "]", hc.hyponormal);
    }
    verdicts.field("psd_tol", tol.psd_tol);
    std::cout << verdicts.line();
    return 0;
}

struct ExampleOptions {
    std::string id;
    int n = 4;
    int cells = 8;
    int grid = 512;
    int cutoff = 200;
    double q = 0.5;
    std::uint64_t seed = 1;
    int trials = 100;
};

int run_example(const ExampleOptions& opt) {
    bool ok = true;
    if (opt.id == "3.1") {
        const OrbitAverageExample ex = example_3_1(opt.n, opt.cells, {}, {}, opt.seed, opt.trials);
        Record rec;
        rec.field("record", "example")
            .field("id", "3.1")
            .field("n", ex.n)
            .field("cells", ex.cells)
            .field("points", ex.instance.size())
            .field("unit_preserved", ex.unit_preserved)
            .field("envelope_trials", ex.trials)
            .field("envelope_holds", ex.envelope_holds)
            .field("max_envelope_ratio", ex.max_envelope_ratio)
            .field("operator_norm", ex.operator_norm);
        std::cout << rec.line();
        ok = ex.unit_preserved && ex.envelope_holds;
    } else if (opt.id == "3.2") {
        const ProductSpaceExample ex = example_3_2(opt.grid);
        const double budget = 5.0 / opt.grid;
        Record rec;
        rec.field("record", "example")
            .field("id", "3.2")
            .field("grid", ex.grid)
            .field("max_err_exp_u2", ex.max_err_exp_u2)
            .field("max_err_exp_w2", ex.max_err_exp_w2)
            .field("max_err_exp_uw2", ex.max_err_exp_uw2)
            .field("max_err_product", ex.max_err_product)
            .field("quadrature_budget", budget)
            .field("rows_gap_positive", ex.rows_gap_positive)
            .field("rows_gap_negative", ex.rows_gap_negative)
            .field("min_gap", ex.min_gap)
            .field("max_gap", ex.max_gap)
            .field("cauchy_schwarz_defect", ex.cauchy_schwarz_defect)
            .field("gap_nonpositive_everywhere", ex.gap_nonpositive_everywhere)
            .field("exp_uw_modulus_min", ex.exp_uw_modulus_min)
            .field("exp_uw_modulus_max", ex.exp_uw_modulus_max)
            .field("sigma_value_if_equality", ex.sigma_value_if_equality);
        std::cout << rec.line();
        ok = ex.cauchy_schwarz_defect <= 1e-12 && ex.max_err_exp_u2 <= budget &&
             ex.max_err_exp_w2 <= budget && ex.max_err_exp_uw2 <= budget;
    } else if (opt.id == "3.3") {
        if (opt.grid % 2 != 0) throw CLI::ValidationError("--grid", "must be even for 3.3");
        const HalfShiftExample ex = example_3_3(opt.grid);
        Record rec;
        rec.field("record", "example")
            .field("id", "3.3")
            .field("grid", ex.grid)
            .field("max_err_exp_u2", ex.max_err_exp_u2)
            .field("block_values_strictly_increasing", ex.block_values_strictly_increasing)
            .field("block_values_distinct", ex.block_values_distinct)
            .field("min_gap", ex.min_gap)
            .field("max_gap", ex.max_gap)
            .field("cauchy_schwarz_defect", ex.cauchy_schwarz_defect)
            .field("gap_nonpositive_everywhere", ex.gap_nonpositive_everywhere)
            .field("sigma_p_size", static_cast<long>(ex.sigma_p.size()));
        std::cout << rec.line();
        ok = ex.cauchy_schwarz_defect <= 1e-12 && ex.block_values_strictly_increasing &&
             ex.block_values_distinct && ex.max_err_exp_u2 <= 5.0 / opt.grid;
    } else if (opt.id == "3.4") {
        const GeometricSpaceExample ex = example_3_4(opt.q, opt.cutoff);
        Record rec;
        rec.field("record", "example")
            .field("id", "3.4")
            .field("q", ex.q)
            .field("cutoff", ex.cutoff)
            .field("alpha1_computed", ex.alpha1_computed)
            .field("alpha1_series", ex.alpha1_series)
            .field("alpha1_series_w2n", ex.alpha1_series_w2n)
            .field("alpha1_closed_form", ex.alpha1_closed_form)
            .field("alpha2_computed", ex.alpha2_computed)
            .field("alpha2_series", ex.alpha2_series)
            .field("alpha2_closed_form", ex.alpha2_closed_form)
            .field("err_alpha1", ex.err_alpha1)
            .field("err_alpha2", ex.err_alpha2)
            .field("err_alpha1_closed", ex.err_alpha1_closed)
            .field("err_alpha2_closed", ex.err_alpha2_closed)
            .field("tail_mass", ex.tail_mass)
            .field("sigma_p", ex.sigma_p);
        std::cout << rec.line();
        const double scale1 = 1.0 + std::abs(ex.alpha1_series);
        const double scale2 = 1.0 + std::abs(ex.alpha2_series);
        ok = ex.err_alpha1 <= 1e-9 * scale1 && ex.err_alpha2 <= 1e-9 * scale2;
    } else {
        std::cerr << "error: unknown example id '" << opt.id << "' (expected 3.1, 3.2, 3.3, 3.4)\n";
        return 2;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wctlab: numerical laboratory for weighted conditional type operators"};
    app.require_subcommand(1);

    VerifyOptions vopt;
    CLI::App* verify = app.add_subcommand("verify", "run theorem checks over seeded instances");
    verify->add_option("--seed", vopt.seed, "campaign seed")->capture_default_str();
    verify->add_option("--trials", vopt.trials, "number of random instances")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--p", vopt.p_list, "hyponormality exponent(s), default 0.5 1");
    verify->add_option("--r", vopt.r_list, "generalized Aluthge power(s), default 0.75 1 2");
    verify->add_option("--t", vopt.t_list, "inner exponent(s); default per r: 0, r/3, r/2, r");
    verify->add_option("--suite", vopt.suite, "comma list from 2.1,2.2,2.3,2.4,2.5,2.6,2.8")
        ->capture_default_str();
    verify->add_option("--family", vopt.family, "instance family")
        ->check(CLI::IsMember({"generic", "normal", "singleton"}))
        ->capture_default_str();
    verify->add_option("--out", vopt.out_path, "write the record stream to this file");
    verify->add_option("--residual-tol", vopt.tol.residual_rel, "relative residual tolerance")
        ->capture_default_str();
    verify->add_option("--psd-tol", vopt.tol.psd_tol, "PSD defect tolerance")->capture_default_str();
    verify->add_option("--rank-tol", vopt.tol.rank_tol_rel, "relative rank cutoff")
        ->capture_default_str();
    verify->add_option("--merge-tol", vopt.tol.merge_tol, "eigenvalue merge tolerance factor")
        ->capture_default_str();

    std::string spectrum_input;
    ToleranceParams spectrum_tol;
    CLI::App* spectrum = app.add_subcommand("spectrum", "spectra and gaps of an instance file");
    spectrum->add_option("--input", spectrum_input, "instance file (JSON)")->required();
    spectrum->add_option("--residual-tol", spectrum_tol.residual_rel, "relative residual tolerance")
        ->capture_default_str();
    spectrum->add_option("--psd-tol", spectrum_tol.psd_tol, "PSD defect tolerance")
        ->capture_default_str();
    spectrum->add_option("--rank-tol", spectrum_tol.rank_tol_rel, "relative rank cutoff")
        ->capture_default_str();
    spectrum->add_option("--merge-tol", spectrum_tol.merge_tol, "eigenvalue merge tolerance factor")
        ->capture_default_str();

    ExampleOptions eopt;
    CLI::App* example = app.add_subcommand("example", "rebuild a worked example");
    example->add_option("id", eopt.id, "example id: 3.1, 3.2, 3.3 or 3.4")->required();
    example->add_option("--n", eopt.n, "orbit length (3.1)")->check(CLI::PositiveNumber)
        ->capture_default_str();
    example->add_option("--cells", eopt.cells, "cells per interval (3.1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    example->add_option("--grid", eopt.grid, "grid size (3.2, 3.3)")->check(CLI::PositiveNumber)
        ->capture_default_str();
    example->add_option("--cutoff", eopt.cutoff, "truncation cutoff (3.4)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    example->add_option("--q", eopt.q, "geometric parameter in (0,1) (3.4)")->capture_default_str();
    example->add_option("--seed", eopt.seed, "seed for random probe functions (3.1)")
        ->capture_default_str();
    example->add_option("--trials", eopt.trials, "random probe functions (3.1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(vopt);
        if (spectrum->parsed()) return run_spectrum(spectrum_input, spectrum_tol);
        if (example->parsed()) return run_example(eopt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
