#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sarjam/radar.hpp"

namespace sarjam {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Sampled LFM pulse exp(j*pi*K_r*t^2 + j*phase), t in [-T_r/2, T_r/2).
VectorXcd generate_lfm_pc_pulse(const RadarParams& params, double phase);

// Post-compression azimuth sample for slant range R and code phase.
cd azimuth_sample(double range, double phase, const RadarParams& params);

VectorXcd build_target_sequence(const VectorXd& ranges, const VectorXd& phases,
                                const RadarParams& params);

// Slant range history of a scatterer at azimuth x and closest range r0.
VectorXd hyperbolic_trajectory(const RadarParams& params, double azimuth = 0.0);
VectorXd hyperbolic_trajectory(const RadarParams& params, double azimuth, double closest_range);

// Code-free azimuth history exp(-j*4*pi*R/lambda) of the scene center. This is
// what the focused pipeline actually sees after range compression and code
// compensation.
VectorXcd azimuth_reference(const RadarParams& params);

struct PhaseCode {
    VectorXd phases;
    VectorXcd sequence;
};

PhaseCode make_phase_code(const VectorXd& phases, const VectorXd& ranges,
                          const RadarParams& params);

// Uniform random phases in [0, 2pi) from a seeded engine.
VectorXd random_phases(int n, std::uint64_t seed);

// Recovers per-pulse code phases from an optimized sequence using the
// reference range R_c; result wrapped to [0, 2pi).
VectorXd extract_phases(const VectorXcd& sequence, const RadarParams& params);

double wrap_phase(double phase);  // to [0, 2pi)

// DRFM repeater: stores a pulse and replays it code_lag pulses later.
struct JammerModel {
    double delay_fraction = 2.0 / 3.0;
    VectorXd amplitudes;     // per-pulse linear gain
    VectorXd range_offsets;  // per-pulse apparent range offset, m
    int code_lag = -1;

    static JammerModel uniform(int n_pulses, double power_db = 0.04, double range_offset = 0.0,
                               double delay_fraction = 2.0 / 3.0);
    // A delay beyond the receive window of the current pulse lands in the next
    // one, so any delay in (0, 1] PRT gives lag -1.
    static int lag_for_delay(double delay_fraction);
    void validate(int n_pulses) const;
};

struct JammerResponse {
    VectorXcd xi;
    MatrixXcd matrix() const { return xi.asDiagonal(); }
};

// Per-pulse complex gain sigma*exp(-j*4*pi*dR/lambda); zero on pulses with
// nothing stored to replay.
VectorXcd jammer_gain(const JammerModel& jam, const RadarParams& params);

// exp(j*(phi[i+lag] - phi[i])), zero where i+lag falls outside the aperture.
VectorXcd code_differential(const VectorXd& phases, int lag);

// Inverse of code_differential for lag < 0; phases with nothing to chain to
// are set to zero.
VectorXd phases_from_differential(const VectorXcd& differential, int lag);

JammerResponse jammer_response(const JammerModel& jam, const VectorXd& phases,
                               const RadarParams& params);

// Linear operator T with (T s)_i = gain_i * (u_i / u_{i+lag}) * s_{i+lag}, so
// that T s = xi(phi) .* s holds for every s = u .* exp(j*phi).
MatrixXcd replay_operator(const JammerModel& jam, const VectorXcd& reference,
                          const RadarParams& params);

// (2N-1) x N matrix with M(k, i) = conj(seq[i + N - 1 - k]); M*v is the full
// cross-correlation of seq with v, lag zero at row N-1.
MatrixXcd build_extension_matrix(const VectorXcd& seq);

// Fast-time x slow-time complex samples. Row k sits at slant range
// near_range + k * range_spacing.
struct EchoMatrix {
    MatrixXcd data;
    double near_range = 0.0;
    double range_spacing = 0.0;
    bool compressed = false;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
    double range_at(double row) const { return near_range + row * range_spacing; }
};

struct PointScatterer {
    double x = 0.0;  // azimuth, m
    double y = 0.0;  // ground range offset from scene center, m
    double amplitude = 1.0;
};

struct EchoOptions {
    double half_width = 60.0;  // slant-range half-width W of the receive window, m
    double snr_db = 20.0;      // per raw sample for a unit scatterer; inf disables noise
    std::uint64_t noise_seed = 1;
};

// Receive window covering pulse centers with slant range in [R_c - W, R_c + W].
int raw_sample_count(const RadarParams& params, double half_width);
int range_bin_count(const RadarParams& params, double half_width);

// Raw echo of real scatterers (carrying the current pulse code) plus false
// targets replayed by the jammer, which sits at jammer_position and shifts
// each false target in azimuth with a Doppler offset and in range with a
// fixed delay.
EchoMatrix simulate_raw_echo(const std::vector<PointScatterer>& targets,
                             const std::vector<PointScatterer>& false_targets,
                             const PointScatterer& jammer_position, const JammerModel& jam,
                             const VectorXd& phases, const RadarParams& params,
                             const EchoOptions& options);

EchoMatrix range_pulse_compress(const EchoMatrix& echo, const RadarParams& params);

enum class Interpolation { kSinc8, kNearest };

EchoMatrix rcmc(const EchoMatrix& compressed, const RadarParams& params,
                Interpolation mode = Interpolation::kSinc8);

// Multiplies pulse n by exp(-j*phi_n).
EchoMatrix compensate_code(const EchoMatrix& echo, const VectorXd& phases);

// Little-endian "SARE" container: u32 rows, u32 cols, row-major (re, im) f64.
void write_sare(const std::string& path, const MatrixXcd& m);
MatrixXcd read_sare(const std::string& path);
void write_complex_csv(const std::string& path, const MatrixXcd& m,
                       const std::string& header = "");
void write_complex_csv(const std::string& path, const VectorXcd& v,
                       const std::string& header = "");
VectorXcd read_complex_csv(const std::string& path);

}  // namespace sarjam
