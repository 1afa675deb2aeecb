#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sarjam/config.hpp"
#include "sarjam/errors.hpp"

namespace fs = std::filesystem;
using namespace sarjam;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNoConvergence = 2, kNumerical = 3, kMissing = 4 };

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string scenario;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "INI or JSON experiment config");
    cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
    cmd->add_option("--seed", c.seed, "random seed (overrides optimizer.seed)");
    cmd->add_option("--scenario", c.scenario, "point or distributed")
        ->check(CLI::IsMember({"point", "distributed"}));
}

ExperimentConfig load(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? parse_config_text("", false) : parse_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.scenario.empty()) cfg.scenario = c.scenario;
    if (!c.out.empty()) cfg.output_dir = c.out;
    fs::create_directories(cfg.output_dir);
    return cfg;
}

std::string header(const ExperimentConfig& cfg, const std::string& command) {
    return "config_hash=" + config_hash_hex(cfg) + "\nseed=" + std::to_string(cfg.seed) +
           "\ncommand=" + command;
}

std::string path_in(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

void require(const std::string& path) {
    if (!fs::exists(path)) throw MissingArtifactError("missing artifact: " + path);
}

int cmd_optimize(const ExperimentConfig& cfg) {
    const RadarParams& p = cfg.radar;
    const std::string hdr = header(cfg, "optimize");
    const WmAmmfaOptions opt = make_optimizer_options(cfg);
    const bool code_mode = cfg.mode == OptimizerMode::kCode;
    WmAmmfaProblem problem = code_mode ? make_code_problem(cfg) : make_sequence_problem(cfg);

    const VectorXd ranges = hyperbolic_trajectory(p, 0.0);
    const VectorXd phases0 = random_phases(p.n_pulses, cfg.seed);
    const VectorXcd s_init = build_target_sequence(ranges, phases0, p);
    const VectorXcd h_init = problem.h;

    const WmAmmfaResult res = run_wm_ammfa(problem, opt);
    VectorXcd s_opt = res.s;
    if (code_mode) {
        const int lag = make_jammer(cfg).code_lag;
        s_opt = build_target_sequence(ranges, phases_from_differential(res.code, lag), p);
        write_complex_csv(path_in(cfg, "code_opt.csv"), res.code, hdr);
    }

    write_trace_csv(path_in(cfg, "trace.csv"), res.trace, hdr);
    write_complex_csv(path_in(cfg, "s_init.csv"), s_init, hdr);
    write_complex_csv(path_in(cfg, "s_opt.csv"), s_opt, hdr);
    write_complex_csv(path_in(cfg, "h_init.csv"), h_init, hdr);
    write_complex_csv(path_in(cfg, "h_opt.csv"), res.h, hdr);
    write_sare(path_in(cfg, "s_opt.bin"), MatrixXcd(s_opt));
    write_sare(path_in(cfg, "h_opt.bin"), MatrixXcd(res.h));

    const CostTerms& last = res.trace.back().cost;
    std::printf("iterations %d  f %.10g  [%.6g, %.6g, %.6g, %.6g]  %s\n", res.trace.back().iteration,
                last.total, last.terms[0], last.terms[1], last.terms[2], last.terms[3],
                res.converged ? "converged" : "not converged");
    if (!res.converged) {
        std::cerr << "optimize: reached " << opt.max_iterations
                  << " iterations without meeting the tolerance\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_phase_diff(const ExperimentConfig& cfg) {
    const std::string a = path_in(cfg, "s_init.csv");
    const std::string b = path_in(cfg, "s_opt.csv");
    require(a);
    require(b);
    const VectorXcd s0 = read_complex_csv(a);
    const VectorXcd s1 = read_complex_csv(b);
    if (s0.size() != s1.size()) throw DimensionError("s_init and s_opt differ in length");

    const std::string out = path_in(cfg, "phase_diff.csv");
    std::ofstream f(out);
    if (!f) throw IoError("cannot open " + out + " for writing");
    std::istringstream lines(header(cfg, "phase-diff"));
    for (std::string line; std::getline(lines, line);) f << "# " << line << '\n';
    f << "pulse,phase_init,phase_opt,delta\n";
    char buf[128];
    for (Eigen::Index i = 0; i < s0.size(); ++i) {
        const double p0 = wrap_phase(std::arg(s0[i]));
        const double p1 = wrap_phase(std::arg(s1[i]));
        double d = std::remainder(p1 - p0, 2.0 * kPi);
        if (d == 0.0) d = 0.0;  // drop negative zero
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", static_cast<long>(i), p0, p1, d);
        f << buf;
    }
    return kOk;
}

void write_image_set(const ExperimentConfig& cfg, const std::string& stem, const SarImage& img,
                     const std::string& hdr) {
    write_image_pgm(path_in(cfg, stem + ".pgm"), img, cfg.dynamic_range_db);
    write_image_db_csv(path_in(cfg, stem + ".csv"), img, hdr);
    write_sare(path_in(cfg, stem + ".bin"), img.pixels);
}

int cmd_experiment(const ExperimentConfig& cfg, Method method) {
    const std::string name = method_name(method);
    const std::string hdr = header(cfg, "experiment " + name) + "\nscenario=" + cfg.scenario;
    const ExperimentSetup setup = make_setup(cfg);

    const SarImage ref = reference_image(setup);
    write_image_set(cfg, "reference_image", ref, hdr);

    const MethodResult jammed = method == Method::kNone ? MethodResult{}
                                                        : run_method(setup, Method::kNone, ref);
    const MethodResult res = run_method(setup, method, ref);
    const MethodResult& none = method == Method::kNone ? res : jammed;
    write_image_set(cfg, "jammed_image", none.image, hdr);
    write_image_set(cfg, name + "_image", res.image, hdr);

    const EchoMatrix echo = simulate_scene_echo(setup.scene, setup.jammer, res.phases, setup.params,
                                                setup.snr_db, setup.seed, true);
    write_sare(path_in(cfg, name + "_echo.bin"), echo.data);
    write_complex_csv(path_in(cfg, name + "_filter.csv"), res.filter, hdr);
    write_complex_csv(path_in(cfg, name + "_code.csv"),
                      VectorXcd(res.phases.unaryExpr([](double ph) { return std::polar(1.0, ph); })),
                      hdr);
    write_profile_csv(path_in(cfg, name + "_profile.csv"), res.profile_db,
                      hdr + "\nrange_bin=" + std::to_string(res.jammed_bin));
    write_report_csv(path_in(cfg, name + "_metrics.csv"), {res.report}, hdr);
    if (method == Method::kProposed)
        write_trace_csv(path_in(cfg, "design_trace.csv"), res.design.trace, hdr);

    std::cout << format_report_table({res.report});
    return kOk;
}

int cmd_metrics(const ExperimentConfig& cfg) {
    const std::string ref_path = path_in(cfg, "reference_image.bin");
    require(ref_path);
    const ExperimentSetup setup = make_setup(cfg);

    SarImage ref = reference_image(setup);
    const MatrixXcd saved_ref = read_sare(ref_path);
    if (saved_ref.rows() != ref.rows() || saved_ref.cols() != ref.cols())
        throw DimensionError("reference image does not match the configured geometry");
    ref.pixels = saved_ref;

    std::vector<MetricReport> rows;
    for (Method m : {Method::kNone, Method::kApc, Method::kProposed}) {
        const std::string name = method_name(m);
        const std::string img_path = path_in(cfg, name + "_image.bin");
        if (!fs::exists(img_path)) continue;
        const std::string filter_path = path_in(cfg, name + "_filter.csv");
        require(filter_path);
        SarImage img = ref;
        img.pixels = read_sare(img_path);
        if (img.pixels.rows() != ref.rows() || img.pixels.cols() != ref.cols())
            throw DimensionError(img_path + " does not match the reference geometry");
        rows.push_back(evaluate_image(setup, m, img, ref, VectorXd(), read_complex_csv(filter_path)));
    }
    if (rows.empty())
        throw MissingArtifactError("no <method>_image.bin in " + cfg.output_dir +
                                   "; run the experiment command first");
    write_report_csv(path_in(cfg, "metrics.csv"), rows, header(cfg, "metrics"));
    std::cout << format_report_table(rows);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAR waveform/filter co-design against repeater deception jamming"};
    app.require_subcommand(1);

    Common opt_args, exp_args, diff_args, met_args;
    std::string method = "proposed";
    auto* optimize = app.add_subcommand("optimize", "run the alternating co-design optimizer");
    add_common(optimize, opt_args);
    auto* experiment = app.add_subcommand("experiment", "image a scenario with one method");
    add_common(experiment, exp_args);
    experiment->add_option("--method", method, "none, apc or proposed")
        ->check(CLI::IsMember({"none", "apc", "proposed"}));
    auto* phase_diff = app.add_subcommand("phase-diff", "phase change between initial and optimized code");
    add_common(phase_diff, diff_args);
    auto* metrics = app.add_subcommand("metrics", "metric table from experiment outputs");
    add_common(metrics, met_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (optimize->parsed()) return cmd_optimize(load(opt_args));
        if (experiment->parsed()) return cmd_experiment(load(exp_args), parse_method(method));
        if (phase_diff->parsed()) return cmd_phase_diff(load(diff_args));
        if (metrics->parsed()) return cmd_metrics(load(met_args));
    } catch (const MissingArtifactError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissing;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
