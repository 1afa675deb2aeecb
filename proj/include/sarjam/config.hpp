#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sarjam/experiment.hpp"

namespace sarjam {

enum class OptimizerMode { kSequence, kCode };

struct ExperimentConfig {
    RadarParams radar;

    double jammer_power_db = 0.04;
    double jammer_range_offset = 0.0;
    double jammer_delay_fraction = 2.0 / 3.0;
    std::optional<int> jammer_code_lag;  // derived from the delay when unset

    std::array<double, 4> alpha{0.2, 0.4, 0.3, 0.1};
    double r_isl_db = -60.0;
    std::optional<double> beta2;  // N when unset
    int mainlobe_halfwidth = 0;

    double tolerance = 1e-6;
    int max_iterations = 200;
    std::uint64_t seed = 1;
    StepRule step_rule = StepRule::kMajorized;
    RankOneGrouping grouping = RankOneGrouping::kExpanded;
    OptimizerMode mode = OptimizerMode::kSequence;

    DesignSettings design;

    std::string scenario = "point";
    std::optional<double> half_width;  // 60 m point, 50 m distributed when unset
    double snr_db = 20.0;
    PointSceneOptions point;
    DistributedSceneOptions distributed;
    std::string reflectivity;  // PGM path; synthetic scene when empty
    std::string false_patch;   // PGM path; synthetic port patch when empty
    std::uint64_t synthetic_seed = 7;

    int mask_range_half = 2;
    int mask_azimuth_half = 3;
    double apc_shift_bins = 3.0;
    double dynamic_range_db = 40.0;

    std::string output_dir = "out";

    ExperimentConfig();
};

// INI (sections + key = value) or JSON ({"section": {"key": value}}).
// Missing file -> IoError, unknown key or malformed value -> ConfigError,
// physical violation -> ParameterError.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, bool json);

// Every key with its resolved value, sorted, one "section.key=value" per line.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

JammerModel make_jammer(const ExperimentConfig& cfg);
CostWeights make_weights(const ExperimentConfig& cfg);
WmAmmfaOptions make_optimizer_options(const ExperimentConfig& cfg);
ExperimentSetup make_setup(const ExperimentConfig& cfg);

// Transmit-domain problem for the optimize command: chirp-consistent random
// code, matched filter start, jammer as a replay operator.
WmAmmfaProblem make_sequence_problem(const ExperimentConfig& cfg);
// Receiver-compensated problem: fixed target history, jammer code as variable.
WmAmmfaProblem make_code_problem(const ExperimentConfig& cfg);

}  // namespace sarjam
