#pragma once

#include <string>
#include <vector>

#include "sarjam/imaging.hpp"

namespace sarjam {

inline constexpr double kDbFloor = -300.0;

// 10 log10(sidelobe / mainlobe energy) of an amplitude profile; the mainlobe
// is the peak +- halfwidth bins.
double islr(const VectorXd& profile, int mainlobe_halfwidth);

// 20 log10(|h^H s| / N).
double lpg(const VectorXcd& s, const VectorXcd& h);

// Windowed SSIM (11x11 Gaussian, sigma 1.5) on raw arrays with dynamic range L.
double ssim_raw(const MatrixXd& a, const MatrixXd& b, double dynamic_range);

// Peak-normalized dB image clamped at -floor_db, shifted to [0, floor_db].
MatrixXd db_image(const MatrixXd& magnitude, double floor_db);

// SSIM of two magnitude images compared in dB with a 40 dB floor.
double ssim(const MatrixXd& a, const MatrixXd& b);

// Histogram MI (256 bins) of dB magnitudes clipped to [peak - 60, peak], bits.
double mutual_information(const MatrixXd& a, const MatrixXd& b);
double histogram_entropy(const MatrixXd& a);

double jsr_image(const MatrixXcd& img, const MaskMatrix& jam_region, const MaskMatrix& target_region);

// 20 log10 |row| normalized to a 0 dB peak.
VectorXd azimuth_profile(const MatrixXcd& img, Eigen::Index range_bin);

struct MetricReport {
    std::string method;
    double ssim = 0.0;
    double mi = 0.0;
    double jsr = 0.0;
    double islr = 0.0;
    double lpg = 0.0;
};

void write_report_csv(const std::string& path, const std::vector<MetricReport>& rows,
                      const std::string& header = "");
std::string format_report_table(const std::vector<MetricReport>& rows);

}  // namespace sarjam
