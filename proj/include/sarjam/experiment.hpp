#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sarjam/apc.hpp"
#include "sarjam/codesign.hpp"
#include "sarjam/imaging.hpp"
#include "sarjam/metrics.hpp"

namespace sarjam {

enum class Method { kNone, kApc, kProposed };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Settings of the receiver-compensated co-design used for imaging. The
// sidelobe mask excludes the azimuth mainlobe so the filter is not pushed to
// trade away the target's own compression.
struct DesignSettings {
    std::array<double, 4> alpha{0.05, 4.0, 0.3, 100.0};
    double r_isl_db = -60.0;
    int mainlobe_halfwidth = 3;
    int max_iterations = 600;
    double tolerance = 1e-6;
    // The jammer term is averaged over replays Doppler-shifted uniformly
    // across +-doppler_halfwidth_bins (bins of PRF/N), covering false targets
    // placed away from the jammer in azimuth. 1 sample = jammer position only.
    double doppler_halfwidth_bins = 4.0;
    int doppler_samples = 9;
};

struct ProposedDesign {
    VectorXd phases;   // transmit code
    VectorXcd filter;  // azimuth filter, |h|^2 = N
    VectorXcd code;    // code differential seen by the jammer
    std::vector<TraceRow> trace;
    bool converged = false;
};

ProposedDesign design_proposed(const RadarParams& params, const JammerModel& jam,
                               const DesignSettings& settings, std::uint64_t seed);

struct ExperimentSetup {
    RadarParams params;
    JammerModel jammer;
    Scene scene;
    DesignSettings design;
    double snr_db = 20.0;
    std::uint64_t seed = 1;
    double apc_shift_bins = 3.0;
    int mask_range_half = 2;
    int mask_azimuth_half = 3;
};

struct MethodResult {
    Method method = Method::kNone;
    VectorXd phases;
    VectorXcd filter;
    SarImage image;      // scene + jammer
    SarImage jam_only;   // jammer contribution alone, noise-free
    Eigen::Index jammed_bin = 0;
    VectorXd profile_db;
    MetricReport report;
    ProposedDesign design;  // filled for kProposed
};

// Jam-free, uncoded, matched-filter image of the same scene.
SarImage reference_image(const ExperimentSetup& setup);

MethodResult run_method(const ExperimentSetup& setup, Method method, const SarImage& reference);
MethodResult run_apc_experiment(const ExperimentSetup& setup, const SarImage& reference);

// Region masks for JSR: boxes around the real targets, and boxes around the
// false targets minus the real ones.
MaskMatrix target_region(const ExperimentSetup& setup, const SarImage& img);
MaskMatrix jam_region(const ExperimentSetup& setup, const SarImage& img);
Eigen::Index jammed_range_bin(const ExperimentSetup& setup, const SarImage& img);

MetricReport evaluate_image(const ExperimentSetup& setup, Method method, const SarImage& img,
                            const SarImage& reference, const VectorXd& phases,
                            const VectorXcd& filter);

// Desk-sized point scenario: 64 pulses, cross at 8 m pitch, false square at
// 12 m pitch.
ExperimentSetup desk_point_setup(std::uint64_t seed = 1);
// Desk-sized distributed scenario on the synthetic 64x64 lake scene.
ExperimentSetup desk_distributed_setup(std::uint64_t seed = 1);

}  // namespace sarjam
