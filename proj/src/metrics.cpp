#include "sarjam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sarjam/errors.hpp"

namespace sarjam {

namespace {
double to_db10(double ratio) {
    if (!(ratio > 0.0)) return kDbFloor;
    return std::max(kDbFloor, 10.0 * std::log10(ratio));
}

void same_shape(const MatrixXd& a, const MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("images differ in size");
}

MatrixXd gaussian_window() {
    constexpr int kSize = 11;
    constexpr double kSigma = 1.5;
    MatrixXd w(kSize, kSize);
    for (int i = 0; i < kSize; ++i)
        for (int j = 0; j < kSize; ++j) {
            const double di = i - kSize / 2, dj = j - kSize / 2;
            w(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * kSigma * kSigma));
        }
    return w / w.sum();
}

// Bin index of each pixel's dB value within [peak - 60, peak].
std::vector<int> db_bins(const MatrixXd& a) {
    constexpr double kSpan = 60.0;
    constexpr int kBins = 256;
    const double peak = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    std::vector<int> bins(static_cast<size_t>(a.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double mag = std::abs(a.data()[i]);
        double db = (mag > 0.0 && peak > 0.0) ? 20.0 * std::log10(mag / peak) : kDbFloor;
        db = std::clamp(db, -kSpan, 0.0);
        const int b = static_cast<int>(std::floor((db + kSpan) / kSpan * kBins));
        bins[static_cast<size_t>(i)] = std::min(kBins - 1, std::max(0, b));
    }
    return bins;
}
}  // namespace

double islr(const VectorXd& profile, int mainlobe_halfwidth) {
    if (profile.size() == 0) throw DimensionError("islr of an empty profile");
    if ((profile.array() < 0.0).any()) throw ParameterError("islr profile must be non-negative");
    Eigen::Index peak = 0;
    profile.maxCoeff(&peak);
    double main = 0.0, side = 0.0;
    for (Eigen::Index i = 0; i < profile.size(); ++i) {
        const double e = profile[i] * profile[i];
        if (std::abs(i - peak) <= mainlobe_halfwidth)
            main += e;
        else
            side += e;
    }
    if (!(main > 0.0)) throw NumericalError("islr undefined: zero mainlobe energy");
    return to_db10(side / main);
}

double lpg(const VectorXcd& s, const VectorXcd& h) {
    if (s.size() != h.size() || s.size() == 0) throw DimensionError("lpg: length mismatch");
    const double g = std::abs(h.dot(s)) / static_cast<double>(s.size());
    return to_db10(g * g);
}

double ssim_raw(const MatrixXd& a, const MatrixXd& b, double dynamic_range) {
    same_shape(a, b);
    const MatrixXd w = gaussian_window();
    const Eigen::Index k = w.rows();
    if (a.rows() < k || a.cols() < k) throw DimensionError("ssim needs images of at least 11x11");
    const double c1 = std::pow(0.01 * dynamic_range, 2);
    const double c2 = std::pow(0.03 * dynamic_range, 2);
    double total = 0.0;
    long count = 0;
    for (Eigen::Index r = 0; r + k <= a.rows(); ++r)
        for (Eigen::Index c = 0; c + k <= a.cols(); ++c) {
            const auto pa = a.block(r, c, k, k).array();
            const auto pb = b.block(r, c, k, k).array();
            const double ma = (w.array() * pa).sum();
            const double mb = (w.array() * pb).sum();
            const double va = (w.array() * pa.square()).sum() - ma * ma;
            const double vb = (w.array() * pb.square()).sum() - mb * mb;
            const double cov = (w.array() * pa * pb).sum() - ma * mb;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    return total / static_cast<double>(count);
}

MatrixXd db_image(const MatrixXd& magnitude, double floor_db) {
    const double peak = magnitude.size() ? magnitude.cwiseAbs().maxCoeff() : 0.0;
    MatrixXd out(magnitude.rows(), magnitude.cols());
    for (Eigen::Index i = 0; i < magnitude.size(); ++i) {
        const double m = std::abs(magnitude.data()[i]);
        const double db = (m > 0.0 && peak > 0.0) ? 20.0 * std::log10(m / peak) : kDbFloor;
        out.data()[i] = std::max(db, -floor_db) + floor_db;
    }
    return out;
}

double ssim(const MatrixXd& a, const MatrixXd& b) {
    same_shape(a, b);
    constexpr double kFloor = 40.0;
    const MatrixXd da = db_image(a, kFloor);
    const MatrixXd db = db_image(b, kFloor);
    const double range = std::max(da.maxCoeff(), db.maxCoeff());
    return ssim_raw(da, db, range > 0.0 ? range : kFloor);
}

double mutual_information(const MatrixXd& a, const MatrixXd& b) {
    same_shape(a, b);
    constexpr int kBins = 256;
    const auto ba = db_bins(a);
    const auto bb = db_bins(b);
    std::vector<double> joint(kBins * kBins, 0.0), pa(kBins, 0.0), pb(kBins, 0.0);
    const double n = static_cast<double>(ba.size());
    for (size_t i = 0; i < ba.size(); ++i) {
        joint[static_cast<size_t>(ba[i] * kBins + bb[i])] += 1.0 / n;
        pa[static_cast<size_t>(ba[i])] += 1.0 / n;
        pb[static_cast<size_t>(bb[i])] += 1.0 / n;
    }
    double mi = 0.0;
    for (int i = 0; i < kBins; ++i)
        for (int j = 0; j < kBins; ++j) {
            const double p = joint[static_cast<size_t>(i * kBins + j)];
            if (p > 0.0) mi += p * std::log2(p / (pa[static_cast<size_t>(i)] * pb[static_cast<size_t>(j)]));
        }
    return std::max(mi, 0.0);
}

double histogram_entropy(const MatrixXd& a) {
    constexpr int kBins = 256;
    const auto bins = db_bins(a);
    std::vector<double> p(kBins, 0.0);
    for (int b : bins) p[static_cast<size_t>(b)] += 1.0 / static_cast<double>(bins.size());
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double jsr_image(const MatrixXcd& img, const MaskMatrix& jam_region, const MaskMatrix& target_region) {
    if (jam_region.rows() != img.rows() || jam_region.cols() != img.cols() ||
        target_region.rows() != img.rows() || target_region.cols() != img.cols())
        throw DimensionError("jsr masks must match the image size");
    if (!jam_region.any() || !target_region.any()) throw ParameterError("jsr regions must be non-empty");
    if ((jam_region.array() && target_region.array()).any())
        throw ParameterError("jsr regions must be disjoint");
    double ej = 0.0, et = 0.0;
    for (Eigen::Index i = 0; i < img.size(); ++i) {
        const double e = std::norm(img.data()[i]);
        if (jam_region.data()[i]) ej += e;
        if (target_region.data()[i]) et += e;
    }
    if (!(et > 0.0)) throw NumericalError("jsr undefined: zero target energy");
    return to_db10(ej / et);
}

VectorXd azimuth_profile(const MatrixXcd& img, Eigen::Index range_bin) {
    if (range_bin < 0 || range_bin >= img.rows()) throw DimensionError("range bin out of range");
    const VectorXd mag = img.row(range_bin).cwiseAbs().transpose();
    const double peak = mag.size() ? mag.maxCoeff() : 0.0;
    VectorXd out(mag.size());
    for (Eigen::Index i = 0; i < mag.size(); ++i)
        out[i] = (mag[i] > 0.0 && peak > 0.0) ? std::max(kDbFloor, 20.0 * std::log10(mag[i] / peak))
                                              : kDbFloor;
    return out;
}

void write_report_csv(const std::string& path, const std::vector<MetricReport>& rows,
                      const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) f << "# " << line << '\n';
    f << "method,ssim,mi,jsr_db,islr_db,lpg_db\n";
    // Values that print as zero should not keep a minus sign.
    auto tidy = [](double v, double resolution) { return std::abs(v) < 0.5 * resolution ? 0.0 : v; };
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.4f,%.4f,%.4f\n", r.method.c_str(),
                      tidy(r.ssim, 1e-6), tidy(r.mi, 1e-6), tidy(r.jsr, 1e-4), tidy(r.islr, 1e-4),
                      tidy(r.lpg, 1e-4));
        f << buf;
    }
}

std::string format_report_table(const std::vector<MetricReport>& rows) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %8s %8s %10s\n", "method", "SSIM", "MI", "JSR");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-12s %8.2f %8.2f %7.2f dB\n", r.method.c_str(), r.ssim,
                      r.mi, r.jsr);
        os << buf;
    }
    return os.str();
}

}  // namespace sarjam
