#include "sarjam/experiment.hpp"

#include <cmath>
#include <limits>

#include "sarjam/errors.hpp"

namespace sarjam {

std::string method_name(Method m) {
    switch (m) {
        case Method::kNone: return "none";
        case Method::kApc: return "apc";
        case Method::kProposed: return "proposed";
    }
    return "none";
}

Method parse_method(const std::string& name) {
    if (name == "none") return Method::kNone;
    if (name == "apc") return Method::kApc;
    if (name == "proposed") return Method::kProposed;
    throw ConfigError("unknown method '" + name + "' (expected none, apc or proposed)");
}

ProposedDesign design_proposed(const RadarParams& params, const JammerModel& jam,
                               const DesignSettings& settings, std::uint64_t seed) {
    params.validate();
    const int n = params.n_pulses;
    if (jam.code_lag >= 0)
        throw ParameterError("code co-design needs a lagged jammer (code_lag < 0)");

    WmAmmfaProblem problem;
    problem.s = azimuth_reference(params);
    problem.h = build_matched_azimuth_filter(params);
    problem.weights = CostWeights::make(n, settings.alpha, settings.r_isl_db,
                                        settings.mainlobe_halfwidth);
    problem.jammer_gain = jammer_gain(jam, params);
    problem.jammer_code = code_differential(random_phases(n, seed), jam.code_lag);
    if (settings.doppler_samples < 1) throw ParameterError("design needs >= 1 Doppler sample");
    if (settings.doppler_samples > 1) {
        const double bin = params.prf() / n;
        for (int k = 0; k < settings.doppler_samples; ++k) {
            const double frac = -1.0 + 2.0 * k / (settings.doppler_samples - 1);
            const double f = frac * settings.doppler_halfwidth_bins * bin;
            VectorXcd d(n);
            for (int i = 0; i < n; ++i) d[i] = std::polar(1.0, 2.0 * kPi * f * params.slow_time(i));
            problem.jammer_doppler.push_back(d);
        }
    }

    WmAmmfaOptions opt;
    opt.waveform = WaveformUpdate::kJammerCode;
    opt.max_iterations = settings.max_iterations;
    opt.tolerance = settings.tolerance;
    const WmAmmfaResult res = run_wm_ammfa(problem, opt);

    ProposedDesign d;
    d.code = res.code;
    d.phases = phases_from_differential(res.code, jam.code_lag);
    d.filter = res.h;
    d.trace = res.trace;
    d.converged = res.converged;
    return d;
}

SarImage reference_image(const ExperimentSetup& setup) {
    const int n = setup.params.n_pulses;
    const VectorXd zero = VectorXd::Zero(n);
    const EchoMatrix echo = simulate_scene_echo(setup.scene, setup.jammer, zero, setup.params,
                                                setup.snr_db, setup.seed, false);
    return rda_image(echo, zero, build_matched_azimuth_filter(setup.params), setup.params);
}

MaskMatrix target_region(const ExperimentSetup& setup, const SarImage& img) {
    return point_mask(img, setup.params, setup.scene.targets, setup.mask_range_half,
                      setup.mask_azimuth_half);
}

MaskMatrix jam_region(const ExperimentSetup& setup, const SarImage& img) {
    const MaskMatrix fake = point_mask(img, setup.params, setup.scene.false_targets,
                                       setup.mask_range_half, setup.mask_azimuth_half);
    const MaskMatrix real = target_region(setup, img);
    return (fake.array() && !real.array()).matrix();
}

Eigen::Index jammed_range_bin(const ExperimentSetup& setup, const SarImage& img) {
    const PixelPos p = locate(img, setup.params, setup.scene.jammer_position.x,
                              setup.scene.jammer_position.y);
    const long row = std::lround(p.row);
    if (row < 0 || row >= img.rows()) throw GeometryError("jammer lies outside the image");
    return row;
}

MetricReport evaluate_image(const ExperimentSetup& setup, Method method, const SarImage& img,
                            const SarImage& reference, const VectorXd& /*phases*/,
                            const VectorXcd& filter) {
    MetricReport r;
    r.method = method_name(method);
    const MatrixXd mag = img.magnitude();
    const MatrixXd ref = reference.magnitude();
    r.ssim = ssim(ref, mag);
    r.mi = mutual_information(ref, mag);
    r.jsr = jsr_image(img.pixels, jam_region(setup, img), target_region(setup, img));
    const VectorXcd u = azimuth_reference(setup.params);
    const VectorXd response = (build_extension_matrix(filter) * u).cwiseAbs();
    r.islr = islr(response, setup.design.mainlobe_halfwidth);
    r.lpg = lpg(u, filter);
    return r;
}

MethodResult run_method(const ExperimentSetup& setup, Method method, const SarImage& reference) {
    const RadarParams& p = setup.params;
    MethodResult out;
    out.method = method;
    switch (method) {
        case Method::kNone:
            out.phases = VectorXd::Zero(p.n_pulses);
            out.filter = build_matched_azimuth_filter(p);
            break;
        case Method::kApc:
            out.phases = ApcCode::with_shift(p.n_pulses, setup.apc_shift_bins).encode_phases();
            out.filter = build_matched_azimuth_filter(p);
            break;
        case Method::kProposed:
            out.design = design_proposed(p, setup.jammer, setup.design, setup.seed);
            out.phases = out.design.phases;
            out.filter = out.design.filter;
            break;
    }
    const EchoMatrix echo =
        simulate_scene_echo(setup.scene, setup.jammer, out.phases, p, setup.snr_db, setup.seed, true);
    out.image = rda_image(echo, out.phases, out.filter, p);

    Scene fakes_only = setup.scene;
    fakes_only.targets.clear();
    const EchoMatrix jam_echo = simulate_scene_echo(fakes_only, setup.jammer, out.phases, p,
                                                    std::numeric_limits<double>::infinity(),
                                                    setup.seed, true);
    out.jam_only = rda_image(jam_echo, out.phases, out.filter, p);

    out.jammed_bin = jammed_range_bin(setup, out.image);
    out.profile_db = azimuth_profile(out.image.pixels, out.jammed_bin);
    out.report = evaluate_image(setup, method, out.image, reference, out.phases, out.filter);
    return out;
}

MethodResult run_apc_experiment(const ExperimentSetup& setup, const SarImage& reference) {
    return run_method(setup, Method::kApc, reference);
}

ExperimentSetup desk_point_setup(std::uint64_t seed) {
    ExperimentSetup s;
    s.params = RadarParams{};
    s.jammer = JammerModel::uniform(s.params.n_pulses);
    PointSceneOptions o;
    o.spacing = 8.0;
    o.arm_count = 2;
    o.false_pitch = 12.0;
    o.false_size = 3;
    o.half_width = 60.0;
    s.scene = make_point_scene(s.params, o);
    s.seed = seed;
    return s;
}

ExperimentSetup desk_distributed_setup(std::uint64_t seed) {
    ExperimentSetup s;
    s.params = RadarParams{};
    s.jammer = JammerModel::uniform(s.params.n_pulses);
    DistributedSceneOptions o;
    o.grid_dx = 0.8;
    o.grid_dy = 1.5;
    o.false_center_x = 0.0;
    o.false_center_y = -36.0;
    o.false_dx = 0.8;
    o.false_dy = 1.0;
    o.half_width = 50.0;
    s.scene = make_distributed_scene(synthetic_reflectivity(64, 7), synthetic_port_patch(16),
                                     s.params, o);
    s.seed = seed;
    return s;
}

}  // namespace sarjam
