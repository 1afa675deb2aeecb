#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sarjam/signal_model.hpp"

namespace sarjam {

using MaskMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// h_i = A_i exp(j(-2 pi V^2 t_i^2 / (lambda R_c) + theta_i)), scaled to |h|^2 = N.
VectorXcd azimuth_filter_from_parts(const VectorXd& amplitudes, const VectorXd& thetas,
                                    const RadarParams& params);
VectorXcd build_matched_azimuth_filter(const RadarParams& params);

// Range rows x azimuth columns. Column p is at azimuth (p - N/2) * V * PRT,
// row k at slant range near_range + k * range_res.
struct SarImage {
    MatrixXcd pixels;
    double range_res = 0.0;
    double azimuth_res = 0.0;
    double near_range = 0.0;
    double origin_azimuth = 0.0;

    Eigen::Index rows() const { return pixels.rows(); }
    Eigen::Index cols() const { return pixels.cols(); }
    MatrixXd magnitude() const { return pixels.cwiseAbs(); }
    double column_of(double azimuth) const { return (azimuth - origin_azimuth) / azimuth_res; }
    double row_of_range(double slant_range) const { return (slant_range - near_range) / range_res; }
};

// Full correlation of every range row with h, central N samples kept.
SarImage azimuth_filter(const EchoMatrix& data, const VectorXcd& h, const RadarParams& params);

struct RdaOptions {
    Interpolation rcmc = Interpolation::kSinc8;
};

// Range compression, per-pulse code compensation, RCMC, azimuth filtering.
SarImage rda_image(const EchoMatrix& raw_echo, const VectorXd& phases, const VectorXcd& h,
                   const RadarParams& params, const RdaOptions& options = {});

struct Scene {
    std::vector<PointScatterer> targets;
    std::vector<PointScatterer> false_targets;  // absolute positions of the fakes
    PointScatterer jammer_position;             // jammer carrier location
    double half_width = 60.0;                   // slant-range half-width of the window
    double azimuth_half_width = 60.0;

    // Optional grid form; kept for reporting, the scatterer lists drive the echo.
    MatrixXd reflectivity;
    double grid_dx = 0.0;
    double grid_dy = 0.0;

    void validate(const RadarParams& params) const;
};

struct PointSceneOptions {
    double spacing = 20.0;     // real cross pitch
    int arm_count = 2;         // scatterers per half-arm
    double false_pitch = 10.0; // false square pitch
    int false_size = 3;        // false square is false_size x false_size
    double half_width = 60.0;
    double false_amplitude = 1.0;
};

// Real cross centered at the origin plus a false square centered on it. The
// false point that would coincide with the real center is omitted.
Scene make_point_scene(const RadarParams& params, const PointSceneOptions& options = {});

struct DistributedSceneOptions {
    double grid_dx = 0.8;  // azimuth spacing of reflectivity pixels, m
    double grid_dy = 1.0;  // ground-range spacing, m
    double false_center_x = -60.0;
    double false_center_y = -60.0;
    double false_dx = 0.8;
    double false_dy = 1.0;
    double half_width = 60.0;
    double false_gain = 1.0;
};

// Grayscale image in [0, 1] (PGM P2/P5, 8 or 16 bit).
MatrixXd read_grayscale(const std::string& path);
void write_grayscale_pgm(const std::string& path, const MatrixXd& values);

// Reflectivity grid (rows = ground range, cols = azimuth) centered on the
// scene origin; the false patch is centered at (false_center_x, false_center_y)
// and replayed through the jammer.
Scene make_distributed_scene(const MatrixXd& reflectivity, const MatrixXd& false_patch,
                             const RadarParams& params, const DistributedSceneOptions& options);
Scene make_distributed_scene(const std::string& source, const std::string& false_source,
                             const RadarParams& params, const DistributedSceneOptions& options);

// Synthetic lake-side scene: textured land with a few strong structures and
// a dark lake body, plus a pier-like false patch. Deterministic in seed.
MatrixXd synthetic_reflectivity(int size, std::uint64_t seed);
MatrixXd synthetic_port_patch(int size);

void write_scene(const std::string& path, const Scene& scene);
Scene read_scene(const std::string& path);

EchoMatrix simulate_scene_echo(const Scene& scene, const JammerModel& jam, const VectorXd& phases,
                               const RadarParams& params, double snr_db, std::uint64_t noise_seed,
                               bool include_jammer = true);

// Pixel location of a scene point in an image produced by rda_image.
struct PixelPos {
    double row = 0.0;
    double col = 0.0;
};
PixelPos locate(const SarImage& img, const RadarParams& params, double x, double y);

// Boxes of +-range_half rows and +-azimuth_half columns around each point.
MaskMatrix point_mask(const SarImage& img, const RadarParams& params,
                      const std::vector<PointScatterer>& points, int range_half, int azimuth_half);

void write_image_pgm(const std::string& path, const SarImage& img, double dynamic_range_db = 40.0);
void write_image_db_csv(const std::string& path, const SarImage& img, const std::string& header = "");
void write_profile_csv(const std::string& path, const VectorXd& profile_db,
                       const std::string& header = "");

}  // namespace sarjam
