#include "sarjam/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "sarjam/errors.hpp"

namespace sarjam {

namespace {
double db_clamped(double mag, double ref) {
    if (!(mag > 0.0) || !(ref > 0.0)) return -300.0;
    return std::max(-300.0, 20.0 * std::log10(mag / ref));
}

void write_comment(std::ostream& os, const std::string& header) {
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
}
}  // namespace

VectorXcd azimuth_filter_from_parts(const VectorXd& amplitudes, const VectorXd& thetas,
                                    const RadarParams& params) {
    const int n = params.n_pulses;
    if (amplitudes.size() != n || thetas.size() != n)
        throw DimensionError("filter amplitudes/phases must have length N");
    const double rate = 2.0 * kPi * params.speed * params.speed /
                        (params.wavelength() * params.center_range);
    VectorXcd h(n);
    for (int i = 0; i < n; ++i) {
        const double t = params.slow_time(i);
        h[i] = std::polar(amplitudes[i], -rate * t * t + thetas[i]);
    }
    const double norm = h.norm();
    if (!(norm > 0.0)) throw ParameterError("filter amplitudes are all zero");
    return h * (std::sqrt(static_cast<double>(n)) / norm);
}

VectorXcd build_matched_azimuth_filter(const RadarParams& params) {
    params.validate();
    return azimuth_filter_from_parts(VectorXd::Ones(params.n_pulses),
                                     VectorXd::Zero(params.n_pulses), params);
}

SarImage azimuth_filter(const EchoMatrix& data, const VectorXcd& h, const RadarParams& params) {
    const Eigen::Index n = data.cols();
    if (h.size() != n) throw DimensionError("azimuth filter length must equal the pulse count");
    const Eigen::Index c0 = n - 1 - n / 2;
    SarImage img;
    img.pixels = MatrixXcd::Zero(data.rows(), n);
    img.range_res = data.range_spacing;
    img.near_range = data.near_range;
    img.azimuth_res = params.azimuth_bin();
    img.origin_azimuth = -static_cast<double>(n / 2) * params.azimuth_bin();
    const VectorXcd hc = h.conjugate();
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index p = 0; p < n; ++p) {
            const Eigen::Index k = p + c0;
            // out_k = sum_i conj(h[i + n - 1 - k]) x_i
            const Eigen::Index shift = n - 1 - k;
            const Eigen::Index lo = std::max<Eigen::Index>(0, -shift);
            const Eigen::Index hi = std::min<Eigen::Index>(n, n - shift);
            cd acc(0.0);
            for (Eigen::Index i = lo; i < hi; ++i) acc += hc[i + shift] * data.data(r, i);
            img.pixels(r, p) = acc;
        }
    }
    return img;
}

SarImage rda_image(const EchoMatrix& raw_echo, const VectorXd& phases, const VectorXcd& h,
                   const RadarParams& params, const RdaOptions& options) {
    // Code compensation comes before RCMC: the range-Doppler shift needs a
    // coherent azimuth spectrum, which a coded pulse train does not have.
    const EchoMatrix compressed = range_pulse_compress(raw_echo, params);
    const EchoMatrix decoded = compensate_code(compressed, phases);
    const EchoMatrix aligned = rcmc(decoded, params, options.rcmc);
    return azimuth_filter(aligned, h, params);
}

void Scene::validate(const RadarParams& params) const {
    auto check = [&](const PointScatterer& p, const char* kind) {
        if (!(p.amplitude >= 0.0)) throw ParameterError(std::string(kind) + " amplitude must be >= 0");
        const double dr = params.closest_range(p.y) - params.center_range;
        if (std::abs(dr) > half_width || std::abs(p.x) > azimuth_half_width)
            throw GeometryError(std::string(kind) + " at (" + std::to_string(p.x) + ", " +
                                std::to_string(p.y) + ") lies outside the scene half-width");
    };
    for (const auto& t : targets) check(t, "target");
    for (const auto& t : false_targets) check(t, "false target");
}

Scene make_point_scene(const RadarParams& params, const PointSceneOptions& o) {
    const double outer = o.arm_count * o.spacing;
    const double false_outer = 0.5 * (o.false_size - 1) * o.false_pitch;
    if (o.half_width < outer || o.half_width < false_outer)
        throw GeometryError("scene half-width " + std::to_string(o.half_width) +
                            " m cannot hold the cross extent " + std::to_string(outer) + " m");
    Scene scene;
    scene.half_width = o.half_width;
    scene.azimuth_half_width = o.half_width;
    scene.targets.push_back({0.0, 0.0, 1.0});
    for (int a = 1; a <= o.arm_count; ++a) {
        const double d = a * o.spacing;
        scene.targets.push_back({d, 0.0, 1.0});
        scene.targets.push_back({-d, 0.0, 1.0});
        scene.targets.push_back({0.0, d, 1.0});
        scene.targets.push_back({0.0, -d, 1.0});
    }
    scene.jammer_position = {0.0, 0.0, 1.0};
    const double c = 0.5 * (o.false_size - 1);
    for (int i = 0; i < o.false_size; ++i)
        for (int j = 0; j < o.false_size; ++j) {
            const double x = (j - c) * o.false_pitch;
            const double y = (i - c) * o.false_pitch;
            if (std::abs(x) < 1e-12 && std::abs(y) < 1e-12) continue;
            scene.false_targets.push_back({x, y, o.false_amplitude});
        }
    scene.validate(params);
    return scene;
}

MatrixXd read_grayscale(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read image " + path);
    auto token = [&]() {
        std::string t;
        while (f >> t) {
            if (t[0] == '#') {
                std::string rest;
                std::getline(f, rest);
                continue;
            }
            return t;
        }
        throw IoError(path + ": truncated header");
    };
    const std::string magic = token();
    if (magic != "P2" && magic != "P5") throw IoError(path + ": only PGM (P2/P5) is supported");
    const int cols = std::stoi(token());
    const int rows = std::stoi(token());
    const int maxval = std::stoi(token());
    if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 65535) throw IoError(path + ": bad header");
    MatrixXd img(rows, cols);
    if (magic == "P2") {
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) img(r, c) = std::stod(token()) / maxval;
    } else {
        f.get();
        const int bytes = maxval > 255 ? 2 : 1;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                unsigned char b[2] = {0, 0};
                f.read(reinterpret_cast<char*>(b), bytes);
                const int v = bytes == 2 ? (b[0] << 8) | b[1] : b[0];
                img(r, c) = static_cast<double>(v) / maxval;
            }
        if (!f) throw IoError(path + ": truncated pixel data");
    }
    return img;
}

void write_grayscale_pgm(const std::string& path, const MatrixXd& values) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << "P5\n" << values.cols() << ' ' << values.rows() << "\n65535\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = std::clamp(values(r, c), 0.0, 1.0);
            const int q = static_cast<int>(std::lround(v * 65535.0));
            const char b[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xff)};
            f.write(b, 2);
        }
}

Scene make_distributed_scene(const MatrixXd& reflectivity, const MatrixXd& false_patch,
                             const RadarParams& params, const DistributedSceneOptions& o) {
    if (reflectivity.size() == 0) throw DimensionError("empty reflectivity grid");
    Scene scene;
    scene.half_width = o.half_width;
    scene.azimuth_half_width = 0.5 * params.n_pulses * params.azimuth_bin();
    scene.reflectivity = reflectivity;
    scene.grid_dx = o.grid_dx;
    scene.grid_dy = o.grid_dy;
    const double rc = 0.5 * (reflectivity.rows() - 1);
    const double cc = 0.5 * (reflectivity.cols() - 1);
    for (Eigen::Index r = 0; r < reflectivity.rows(); ++r)
        for (Eigen::Index c = 0; c < reflectivity.cols(); ++c) {
            const double a = reflectivity(r, c);
            if (a < 0.0) throw ParameterError("reflectivity must be >= 0");
            if (a == 0.0) continue;
            scene.targets.push_back({(c - cc) * o.grid_dx, (r - rc) * o.grid_dy, a});
        }
    scene.jammer_position = {o.false_center_x, o.false_center_y, 1.0};
    const double pr = 0.5 * (false_patch.rows() - 1);
    const double pc = 0.5 * (false_patch.cols() - 1);
    for (Eigen::Index r = 0; r < false_patch.rows(); ++r)
        for (Eigen::Index c = 0; c < false_patch.cols(); ++c) {
            const double a = false_patch(r, c);
            if (a == 0.0) continue;
            scene.false_targets.push_back({o.false_center_x + (c - pc) * o.false_dx,
                                           o.false_center_y + (r - pr) * o.false_dy,
                                           o.false_gain * a});
        }
    scene.validate(params);
    return scene;
}

Scene make_distributed_scene(const std::string& source, const std::string& false_source,
                             const RadarParams& params, const DistributedSceneOptions& options) {
    return make_distributed_scene(read_grayscale(source), read_grayscale(false_source), params,
                                  options);
}

MatrixXd synthetic_reflectivity(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MatrixXd m(size, size);
    // Smooth field texture from a few random cosines, speckled.
    std::vector<std::array<double, 4>> waves(6);
    for (auto& w : waves) w = {uni(rng) * 0.5, uni(rng) * 0.5, uni(rng) * 2.0 * kPi, 0.3 + uni(rng)};
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double t = 0.0;
            for (const auto& w : waves) t += w[3] * std::cos(w[0] * r + w[1] * c + w[2]);
            const double base = 0.12 + 0.04 * t / waves.size();
            const double speckle = std::sqrt(-std::log(std::max(uni(rng), 1e-12)));
            m(r, c) = std::max(0.0, base * speckle);
        }
    // Lake body over the near-range part of the scene with a gently curved shore.
    for (int c = 0; c < size; ++c) {
        const int shore = static_cast<int>(std::lround(size * (0.55 + 0.04 * std::sin(0.15 * c))));
        for (int r = 0; r < shore; ++r) m(r, c) = 0.0;
    }
    // Strong structures on land.
    for (int b = 0; b < 5; ++b) {
        const int r0 = static_cast<int>(size * (0.68 + 0.25 * uni(rng)));
        const int c0 = static_cast<int>(size * (0.1 + 0.8 * uni(rng)));
        for (int r = r0; r < std::min(size, r0 + 2); ++r)
            for (int c = c0; c < std::min(size, c0 + 3); ++c) m(r, c) = 0.7 + 0.3 * uni(rng);
    }
    return m;
}

MatrixXd synthetic_port_patch(int size) {
    MatrixXd p = MatrixXd::Zero(size, size);
    const int mid = size / 2;
    // Long pier along azimuth, two finger piers and a moored hull.
    for (int c = 1; c < size - 1; ++c) p(mid, c) = 1.0;
    for (int r = 2; r < mid; ++r) {
        p(r, size / 4) = 0.8;
        p(r, 3 * size / 4) = 0.8;
    }
    for (int r = mid + 2; r < std::min(size, mid + 4); ++r)
        for (int c = size / 4; c < 3 * size / 4; ++c) p(r, c) = 0.6;
    return p;
}

void write_scene(const std::string& path, const Scene& s) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    char buf[160];
    auto line = [&](char tag, const PointScatterer& p) {
        std::snprintf(buf, sizeof buf, "%c %.17g %.17g %.17g\n", tag, p.x, p.y, p.amplitude);
        f << buf;
    };
    std::snprintf(buf, sizeof buf, "W %.17g %.17g\n", s.half_width, s.azimuth_half_width);
    f << buf;
    line('J', s.jammer_position);
    for (const auto& t : s.targets) line('T', t);
    for (const auto& t : s.false_targets) line('F', t);
    if (s.reflectivity.size() > 0) {
        std::snprintf(buf, sizeof buf, "G %ld %ld %.17g %.17g\n",
                      static_cast<long>(s.reflectivity.rows()),
                      static_cast<long>(s.reflectivity.cols()), s.grid_dx, s.grid_dy);
        f << buf;
        for (Eigen::Index r = 0; r < s.reflectivity.rows(); ++r)
            for (Eigen::Index c = 0; c < s.reflectivity.cols(); ++c) {
                std::snprintf(buf, sizeof buf, "%.17g\n", s.reflectivity(r, c));
                f << buf;
            }
    }
}

Scene read_scene(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read scene " + path);
    Scene s;
    std::string tag;
    while (f >> tag) {
        if (tag == "W") {
            f >> s.half_width >> s.azimuth_half_width;
        } else if (tag == "J" || tag == "T" || tag == "F") {
            PointScatterer p;
            f >> p.x >> p.y >> p.amplitude;
            if (tag == "J") s.jammer_position = p;
            else if (tag == "T") s.targets.push_back(p);
            else s.false_targets.push_back(p);
        } else if (tag == "G") {
            long rows = 0, cols = 0;
            f >> rows >> cols >> s.grid_dx >> s.grid_dy;
            s.reflectivity.resize(rows, cols);
            for (long r = 0; r < rows; ++r)
                for (long c = 0; c < cols; ++c) f >> s.reflectivity(r, c);
        } else {
            throw IoError(path + ": unknown record '" + tag + "'");
        }
        if (!f) throw IoError(path + ": malformed record");
    }
    return s;
}

EchoMatrix simulate_scene_echo(const Scene& scene, const JammerModel& jam, const VectorXd& phases,
                               const RadarParams& params, double snr_db, std::uint64_t noise_seed,
                               bool include_jammer) {
    EchoOptions opt;
    opt.half_width = scene.half_width;
    opt.snr_db = snr_db;
    opt.noise_seed = noise_seed;
    static const std::vector<PointScatterer> none;
    return simulate_raw_echo(scene.targets, include_jammer ? scene.false_targets : none,
                             scene.jammer_position, jam, phases, params, opt);
}

PixelPos locate(const SarImage& img, const RadarParams& params, double x, double y) {
    return {img.row_of_range(params.closest_range(y)), img.column_of(x)};
}

MaskMatrix point_mask(const SarImage& img, const RadarParams& params,
                      const std::vector<PointScatterer>& points, int range_half, int azimuth_half) {
    MaskMatrix m = MaskMatrix::Constant(img.rows(), img.cols(), false);
    for (const auto& p : points) {
        const PixelPos pos = locate(img, params, p.x, p.y);
        const long r0 = std::lround(pos.row);
        const long c0 = std::lround(pos.col);
        for (long r = r0 - range_half; r <= r0 + range_half; ++r)
            for (long c = c0 - azimuth_half; c <= c0 + azimuth_half; ++c)
                if (r >= 0 && r < img.rows() && c >= 0 && c < img.cols()) m(r, c) = true;
    }
    return m;
}

void write_image_pgm(const std::string& path, const SarImage& img, double dynamic_range_db) {
    if (!(dynamic_range_db > 0.0)) throw ParameterError("dynamic range must be positive");
    const MatrixXd mag = img.magnitude();
    const double peak = mag.size() ? mag.maxCoeff() : 0.0;
    MatrixXd scaled(mag.rows(), mag.cols());
    for (Eigen::Index r = 0; r < mag.rows(); ++r)
        for (Eigen::Index c = 0; c < mag.cols(); ++c) {
            const double db = std::max(db_clamped(mag(r, c), peak), -dynamic_range_db);
            scaled(r, c) = (db + dynamic_range_db) / dynamic_range_db;
        }
    write_grayscale_pgm(path, scaled);
}

void write_image_db_csv(const std::string& path, const SarImage& img, const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_comment(f, header);
    const MatrixXd mag = img.magnitude();
    const double peak = mag.size() ? mag.maxCoeff() : 0.0;
    char buf[32];
    for (Eigen::Index r = 0; r < mag.rows(); ++r) {
        for (Eigen::Index c = 0; c < mag.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.6f", db_clamped(mag(r, c), peak));
            f << (c ? "," : "") << buf;
        }
        f << '\n';
    }
}

void write_profile_csv(const std::string& path, const VectorXd& profile_db, const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_comment(f, header);
    f << "azimuth_index,magnitude_db\n";
    char buf[64];
    for (Eigen::Index i = 0; i < profile_db.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%ld,%.6f\n", static_cast<long>(i), profile_db[i]);
        f << buf;
    }
}

}  // namespace sarjam
