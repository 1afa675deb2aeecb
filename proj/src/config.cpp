#include "sarjam/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "sarjam/errors.hpp"

namespace sarjam {

ExperimentConfig::ExperimentConfig() {
    point.spacing = 8.0;
    point.arm_count = 2;
    point.false_pitch = 12.0;
    point.false_size = 3;
    distributed.grid_dx = 0.8;
    distributed.grid_dy = 1.5;
    distributed.false_center_x = 0.0;
    distributed.false_center_y = -36.0;
    distributed.false_dx = 0.8;
    distributed.false_dy = 1.0;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long i = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
    }
}

struct Field {
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

using Registry = std::map<std::string, Field>;

Registry registry(ExperimentConfig& c) {
    Registry r;
    auto real = [&r](const std::string& key, double& ref) {
        r[key] = {[&ref, key](const std::string& v) { ref = parse_double(key, v); },
                  [&ref] { return fmt_double(ref); }};
    };
    auto integer = [&r](const std::string& key, int& ref) {
        r[key] = {[&ref, key](const std::string& v) { ref = static_cast<int>(parse_int(key, v)); },
                  [&ref] { return std::to_string(ref); }};
    };
    auto text = [&r](const std::string& key, std::string& ref) {
        r[key] = {[&ref](const std::string& v) { ref = v; }, [&ref] { return ref; }};
    };
    auto u64 = [&r](const std::string& key, std::uint64_t& ref) {
        r[key] = {[&ref, key](const std::string& v) { ref = parse_u64(key, v); },
                  [&ref] { return std::to_string(ref); }};
    };

    real("radar.carrier_freq", c.radar.carrier_freq);
    real("radar.bandwidth", c.radar.bandwidth);
    real("radar.pulse_width", c.radar.pulse_width);
    real("radar.prt", c.radar.prt);
    real("radar.sample_rate", c.radar.sample_rate);
    real("radar.speed", c.radar.speed);
    real("radar.center_range", c.radar.center_range);
    real("radar.altitude", c.radar.altitude);
    integer("radar.n_pulses", c.radar.n_pulses);

    real("jammer.power_db", c.jammer_power_db);
    real("jammer.range_offset", c.jammer_range_offset);
    real("jammer.delay_fraction", c.jammer_delay_fraction);
    r["jammer.code_lag"] = {
        [&c](const std::string& v) {
            if (v == "auto") c.jammer_code_lag.reset();
            else c.jammer_code_lag = static_cast<int>(parse_int("jammer.code_lag", v));
        },
        [&c] { return c.jammer_code_lag ? std::to_string(*c.jammer_code_lag) : std::string("auto"); }};

    for (int i = 0; i < 4; ++i) {
        real("weights.alpha" + std::to_string(i + 1), c.alpha[static_cast<size_t>(i)]);
        real("design.alpha" + std::to_string(i + 1), c.design.alpha[static_cast<size_t>(i)]);
    }
    real("weights.r_isl_db", c.r_isl_db);
    r["weights.beta2"] = {
        [&c](const std::string& v) {
            if (v == "auto") c.beta2.reset();
            else c.beta2 = parse_double("weights.beta2", v);
        },
        [&c] { return c.beta2 ? fmt_double(*c.beta2) : std::string("auto"); }};
    integer("weights.mainlobe_halfwidth", c.mainlobe_halfwidth);

    real("optimizer.tolerance", c.tolerance);
    integer("optimizer.max_iterations", c.max_iterations);
    u64("optimizer.seed", c.seed);
    r["optimizer.step_rule"] = {
        [&c](const std::string& v) {
            if (v == "majorized") c.step_rule = StepRule::kMajorized;
            else if (v == "scaled") c.step_rule = StepRule::kScaled;
            else throw ConfigError("optimizer.step_rule: expected majorized or scaled");
        },
        [&c] { return std::string(c.step_rule == StepRule::kMajorized ? "majorized" : "scaled"); }};
    r["optimizer.grouping"] = {
        [&c](const std::string& v) {
            if (v == "expanded") c.grouping = RankOneGrouping::kExpanded;
            else if (v == "bracketed") c.grouping = RankOneGrouping::kBracketed;
            else throw ConfigError("optimizer.grouping: expected expanded or bracketed");
        },
        [&c] { return std::string(c.grouping == RankOneGrouping::kExpanded ? "expanded" : "bracketed"); }};
    r["optimizer.mode"] = {
        [&c](const std::string& v) {
            if (v == "sequence") c.mode = OptimizerMode::kSequence;
            else if (v == "code") c.mode = OptimizerMode::kCode;
            else throw ConfigError("optimizer.mode: expected sequence or code");
        },
        [&c] { return std::string(c.mode == OptimizerMode::kSequence ? "sequence" : "code"); }};

    real("design.r_isl_db", c.design.r_isl_db);
    integer("design.mainlobe_halfwidth", c.design.mainlobe_halfwidth);
    integer("design.max_iterations", c.design.max_iterations);
    real("design.tolerance", c.design.tolerance);

    r["scene.scenario"] = {
        [&c](const std::string& v) {
            if (v != "point" && v != "distributed")
                throw ConfigError("scene.scenario: expected point or distributed");
            c.scenario = v;
        },
        [&c] { return c.scenario; }};
    r["scene.half_width"] = {
        [&c](const std::string& v) {
            if (v == "auto") c.half_width.reset();
            else c.half_width = parse_double("scene.half_width", v);
        },
        [&c] { return c.half_width ? fmt_double(*c.half_width) : std::string("auto"); }};
    real("scene.snr_db", c.snr_db);
    real("scene.spacing", c.point.spacing);
    integer("scene.arm_count", c.point.arm_count);
    real("scene.false_pitch", c.point.false_pitch);
    integer("scene.false_size", c.point.false_size);
    real("scene.false_amplitude", c.point.false_amplitude);
    text("scene.reflectivity", c.reflectivity);
    text("scene.false_patch", c.false_patch);
    u64("scene.synthetic_seed", c.synthetic_seed);
    real("scene.grid_dx", c.distributed.grid_dx);
    real("scene.grid_dy", c.distributed.grid_dy);
    real("scene.false_center_x", c.distributed.false_center_x);
    real("scene.false_center_y", c.distributed.false_center_y);
    real("scene.false_dx", c.distributed.false_dx);
    real("scene.false_dy", c.distributed.false_dy);
    real("scene.false_gain", c.distributed.false_gain);

    integer("metrics.mask_range_half", c.mask_range_half);
    integer("metrics.mask_azimuth_half", c.mask_azimuth_half);
    real("metrics.apc_shift_bins", c.apc_shift_bins);
    real("metrics.dynamic_range_db", c.dynamic_range_db);

    text("output.dir", c.output_dir);
    return r;
}

void validate(const ExperimentConfig& c) {
    c.radar.validate();
    if (c.tolerance < 0.0 || std::isnan(c.tolerance))
        throw ParameterError("optimizer.tolerance must be >= 0");
    if (c.max_iterations < 0) throw ParameterError("optimizer.max_iterations must be >= 0");
    if (c.design.max_iterations < 0) throw ParameterError("design.max_iterations must be >= 0");
    for (double a : c.alpha)
        if (!(a >= 0.0)) throw ParameterError("weights.alpha* must be >= 0");
    for (double a : c.design.alpha)
        if (!(a >= 0.0)) throw ParameterError("design.alpha* must be >= 0");
    if (c.jammer_delay_fraction < 0.0) throw ParameterError("jammer.delay_fraction must be >= 0");
    if (c.jammer_code_lag && *c.jammer_code_lag > 0)
        throw ParameterError("jammer.code_lag must be <= 0");
    if (c.half_width && !(*c.half_width > 0.0)) throw ParameterError("scene.half_width must be > 0");
    if (c.mainlobe_halfwidth < 0 || c.design.mainlobe_halfwidth < 0)
        throw ParameterError("mainlobe half-width must be >= 0");
    if (c.dynamic_range_db <= 0.0) throw ParameterError("metrics.dynamic_range_db must be > 0");
    for (const std::string* p : {&c.reflectivity, &c.false_patch})
        if (!p->empty() && !std::filesystem::exists(*p))
            throw IoError("referenced file does not exist: " + *p);
}

void apply_entries(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& kv) {
    Registry reg = registry(cfg);
    for (const auto& [key, value] : kv) {
        auto it = reg.find(key);
        if (it == reg.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second.set(value);
    }
}

std::vector<std::pair<std::string, std::string>> flatten_ini(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed INI: ") + e.what());
    }
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' must live inside a [section]");
        for (const auto& [key, value] : body) kv.emplace_back(section + "." + key, value.data());
    }
    return kv;
}

std::vector<std::pair<std::string, std::string>> flatten_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object of sections");
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object()) throw ConfigError("JSON section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            std::string v;
            if (value.is_string()) v = value.get<std::string>();
            else if (value.is_number_integer() || value.is_number_unsigned()) v = value.dump();
            else if (value.is_number_float()) v = fmt_double(value.get<double>());
            else throw ConfigError(section + "." + key + ": unsupported JSON value");
            kv.emplace_back(section + "." + key, v);
        }
    }
    return kv;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, bool json) {
    ExperimentConfig cfg;
    bool blank = true;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
    if (!blank) apply_entries(cfg, json ? flatten_json(text) : flatten_ini(text));
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config file not found: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                      (first != std::string::npos && text[first] == '{');
    return parse_config_text(text, json);
}

std::string canonical_config(const ExperimentConfig& cfg) {
    ExperimentConfig copy = cfg;
    const Registry reg = registry(copy);
    std::string out;
    for (const auto& [key, field] : reg) out += key + "=" + field.get() + "\n";
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

JammerModel make_jammer(const ExperimentConfig& cfg) {
    JammerModel jam = JammerModel::uniform(cfg.radar.n_pulses, cfg.jammer_power_db,
                                           cfg.jammer_range_offset, cfg.jammer_delay_fraction);
    if (cfg.jammer_code_lag) jam.code_lag = *cfg.jammer_code_lag;
    return jam;
}

CostWeights make_weights(const ExperimentConfig& cfg) {
    CostWeights w = CostWeights::make(cfg.radar.n_pulses, cfg.alpha, cfg.r_isl_db,
                                      cfg.mainlobe_halfwidth);
    if (cfg.beta2) w.beta2 = *cfg.beta2;
    return w;
}

WmAmmfaOptions make_optimizer_options(const ExperimentConfig& cfg) {
    WmAmmfaOptions o;
    o.tolerance = cfg.tolerance;
    o.max_iterations = cfg.max_iterations;
    o.rule = cfg.step_rule;
    o.grouping = cfg.grouping;
    o.waveform = cfg.mode == OptimizerMode::kSequence ? WaveformUpdate::kSequence
                                                      : WaveformUpdate::kJammerCode;
    return o;
}

ExperimentSetup make_setup(const ExperimentConfig& cfg) {
    ExperimentSetup s;
    s.params = cfg.radar;
    s.jammer = make_jammer(cfg);
    s.design = cfg.design;
    s.snr_db = cfg.snr_db;
    s.seed = cfg.seed;
    s.apc_shift_bins = cfg.apc_shift_bins;
    s.mask_range_half = cfg.mask_range_half;
    s.mask_azimuth_half = cfg.mask_azimuth_half;
    if (cfg.scenario == "point") {
        PointSceneOptions o = cfg.point;
        o.half_width = cfg.half_width.value_or(60.0);
        s.scene = make_point_scene(cfg.radar, o);
    } else {
        DistributedSceneOptions o = cfg.distributed;
        o.half_width = cfg.half_width.value_or(50.0);
        const MatrixXd grid = cfg.reflectivity.empty() ? synthetic_reflectivity(64, cfg.synthetic_seed)
                                                       : read_grayscale(cfg.reflectivity);
        const MatrixXd patch = cfg.false_patch.empty() ? synthetic_port_patch(16)
                                                       : read_grayscale(cfg.false_patch);
        s.scene = make_distributed_scene(grid, patch, cfg.radar, o);
    }
    return s;
}

WmAmmfaProblem make_sequence_problem(const ExperimentConfig& cfg) {
    const RadarParams& p = cfg.radar;
    const VectorXd ranges = hyperbolic_trajectory(p, 0.0);
    const VectorXcd reference = build_target_sequence(ranges, VectorXd::Zero(p.n_pulses), p);
    WmAmmfaProblem prob;
    prob.s = build_target_sequence(ranges, random_phases(p.n_pulses, cfg.seed), p);
    prob.h = build_matched_azimuth_filter(p);
    prob.weights = make_weights(cfg);
    prob.jammer = replay_operator(make_jammer(cfg), reference, p);
    return prob;
}

WmAmmfaProblem make_code_problem(const ExperimentConfig& cfg) {
    const RadarParams& p = cfg.radar;
    const JammerModel jam = make_jammer(cfg);
    WmAmmfaProblem prob;
    prob.s = azimuth_reference(p);
    prob.h = build_matched_azimuth_filter(p);
    prob.weights = make_weights(cfg);
    prob.jammer_gain = jammer_gain(jam, p);
    prob.jammer_code = code_differential(random_phases(p.n_pulses, cfg.seed), jam.code_lag);
    return prob;
}

}  // namespace sarjam
