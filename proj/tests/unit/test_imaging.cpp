#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "helpers.hpp"
#include "sarjam/errors.hpp"
#include "sarjam/imaging.hpp"

using namespace sarjam;
using testutil::cd;

namespace {

constexpr double kNoNoise = std::numeric_limits<double>::infinity();

std::filesystem::path tmp(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "sarjam_imaging";
    std::filesystem::create_directories(dir);
    return dir / name;
}

Scene single_point(double x, double y, double half_width = 20.0) {
    Scene s;
    s.half_width = half_width;
    s.azimuth_half_width = 30.0;
    s.targets.push_back({x, y, 1.0});
    return s;
}

SarImage image_of(const Scene& scene, const VectorXd& phases, const RadarParams& p,
                  bool jammer = false) {
    const JammerModel jam = JammerModel::uniform(p.n_pulses);
    const EchoMatrix e = simulate_scene_echo(scene, jam, phases, p, kNoNoise, 1, jammer);
    return rda_image(e, phases, build_matched_azimuth_filter(p), p);
}

// -3 dB width of a 1-D magnitude cut, in samples, by linear interpolation.
double width_3db(const VectorXd& mag) {
    Eigen::Index peak;
    const double mx = mag.maxCoeff(&peak);
    const double half = mx * std::sqrt(0.5);
    auto cross = [&](int dir) {
        Eigen::Index k = peak;
        while (k + dir >= 0 && k + dir < mag.size() && mag[k + dir] >= half) k += dir;
        if (k + dir < 0 || k + dir >= mag.size()) return static_cast<double>(k);
        const double a = mag[k], b = mag[k + dir];
        return k + dir * (a - half) / (a - b);
    };
    return cross(1) - cross(-1);
}

}  // namespace

TEST_SUITE("imaging") {

TEST_CASE("matched azimuth filter") {
    RadarParams p;
    p.n_pulses = 1;
    const VectorXcd one = build_matched_azimuth_filter(p);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0] - cd(1.0, 0.0)) < 1e-15);

    p.n_pulses = 64;
    const VectorXcd h = build_matched_azimuth_filter(p);
    CHECK(h.squaredNorm() == doctest::Approx(64.0));
    for (int i = 0; i < 64; ++i) CHECK(std::abs(h[i] - h[63 - i]) < 1e-12);
    // Conjugate of the compensated target history at zero azimuth.
    const VectorXcd u = azimuth_reference(p);
    CHECK(std::abs(std::abs(u.dot(h)) - 64.0) < 1e-6);

    CHECK_THROWS_AS(azimuth_filter_from_parts(VectorXd::Zero(64), VectorXd::Zero(64), p),
                    ParameterError);
    CHECK_THROWS_AS(azimuth_filter_from_parts(VectorXd::Ones(3), VectorXd::Zero(3), p),
                    DimensionError);
}

TEST_CASE("azimuth filter on impulses and replicas") {
    RadarParams p;
    p.n_pulses = 16;
    const VectorXcd h = build_matched_azimuth_filter(p);
    EchoMatrix e;
    e.data = MatrixXcd::Zero(3, 16);
    e.range_spacing = 0.75;
    e.near_range = 3990.0;

    const SarImage zero = azimuth_filter(e, h, p);
    CHECK(zero.pixels.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.near_range == 3990.0);
    CHECK(zero.azimuth_res == p.azimuth_bin());

    e.data(0, 5) = 1.0;
    e.data.row(2) = h.transpose();
    const SarImage img = azimuth_filter(e, h, p);
    const Eigen::Index c0 = 16 - 1 - 8;
    for (Eigen::Index col = 0; col < 16; ++col) {
        const Eigen::Index idx = 5 + 16 - 1 - (col + c0);
        const cd expect = idx >= 0 && idx < 16 ? std::conj(h[idx]) : cd(0.0);
        CHECK(std::abs(img.pixels(0, col) - expect) < 1e-12);
    }
    Eigen::Index peak;
    img.pixels.row(2).cwiseAbs().maxCoeff(&peak);
    CHECK(peak == 8);
    CHECK(std::abs(img.pixels(2, 8) - cd(16.0, 0.0)) < 1e-9);
    CHECK(img.column_of(0.0) == doctest::Approx(8.0));

    CHECK_THROWS_AS(azimuth_filter(e, VectorXcd::Ones(4), p), DimensionError);
}

TEST_CASE("rda image of an empty scene is zero") {
    RadarParams p;
    p.n_pulses = 16;
    Scene s = single_point(0.0, 0.0);
    s.targets.clear();
    const SarImage img = image_of(s, VectorXd::Zero(16), p);
    CHECK(img.pixels.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rda focuses a point where the scene puts it") {
    RadarParams p;
    for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{8.0, -6.0}, std::pair{-12.0, 9.0}}) {
        const SarImage img = image_of(single_point(x, y), random_phases(64, 2), p);
        Eigen::Index r, c;
        img.pixels.cwiseAbs().maxCoeff(&r, &c);
        const PixelPos pos = locate(img, p, x, y);
        CHECK(std::abs(r - pos.row) <= 1.0);
        CHECK(std::abs(c - pos.col) <= 1.0);
    }
}

TEST_CASE("rda resolution and peak gain") {
    RadarParams p;
    const SarImage img = image_of(single_point(0.0, 0.0), random_phases(64, 3), p);
    Eigen::Index r, c;
    const double peak = img.pixels.cwiseAbs().maxCoeff(&r, &c);

    // Azimuth: 0.886 lambda R / (2 L) for the synthetic aperture L = N V PRT.
    const double aperture = p.n_pulses * p.speed * p.prt;
    const double expect_az = 0.886 * p.wavelength() * p.center_range / (2.0 * aperture);
    const double az = width_3db(img.pixels.row(r).cwiseAbs().transpose()) * img.azimuth_res;
    CHECK(std::abs(az - expect_az) / expect_az < 0.2);

    // Coherent gain cannot exceed samples-per-pulse times |s||h| = M N.
    const double bound = p.pulse_samples() * static_cast<double>(p.n_pulses);
    CHECK(peak <= 1.01 * bound);
    CHECK(peak >= 0.7 * bound);
}

TEST_CASE("rda is linear") {
    RadarParams p;
    p.n_pulses = 32;
    const VectorXd phi = random_phases(32, 4);
    const JammerModel jam = JammerModel::uniform(32);
    const Scene a = single_point(3.0, 4.0);
    const Scene b = single_point(-5.0, -2.0);
    Scene both = a;
    both.targets.push_back(b.targets[0]);
    const VectorXcd h = build_matched_azimuth_filter(p);
    auto img = [&](const Scene& s) {
        return rda_image(simulate_scene_echo(s, jam, phi, p, kNoNoise, 1, false), phi, h, p).pixels;
    };
    const MatrixXcd sum = img(a) + img(b);
    CHECK((img(both) - sum).norm() <= 1e-9 * sum.norm());
    Scene scaled = a;
    scaled.targets[0].amplitude = 2.5;
    CHECK((img(scaled) - 2.5 * img(a)).norm() <= 1e-9 * img(scaled).norm());
}

TEST_CASE("code compensation disperses the replayed false target") {
    RadarParams p;
    Scene s;
    s.half_width = 20.0;
    s.azimuth_half_width = 30.0;
    s.false_targets.push_back({0.0, 0.0, 1.0});
    const VectorXd zero = VectorXd::Zero(64);
    const VectorXd coded = random_phases(64, 5);
    const SarImage plain = image_of(s, zero, p, true);
    const SarImage disp = image_of(s, coded, p, true);
    const double ratio_db = 20 * std::log10(disp.pixels.cwiseAbs().maxCoeff() /
                                            plain.pixels.cwiseAbs().maxCoeff());
    CHECK(ratio_db < -10.0);
    // Energy is spread, not removed; part of it leaves the kept azimuth window.
    CHECK(disp.pixels.squaredNorm() > 0.1 * plain.pixels.squaredNorm());
}

TEST_CASE("point scene layout") {
    RadarParams p;
    const Scene s = make_point_scene(p);
    CHECK(s.targets.size() == 9);
    CHECK(s.false_targets.size() == 8);
    CHECK(s.half_width == 60.0);
    double maxx = 0.0;
    for (const auto& t : s.targets) {
        CHECK((t.x == 0.0 || t.y == 0.0));
        maxx = std::max(maxx, std::abs(t.x));
    }
    CHECK(maxx == 40.0);
    for (const auto& f : s.false_targets) {
        CHECK(std::abs(f.x) <= 10.0);
        CHECK(std::abs(f.y) <= 10.0);
        CHECK_FALSE((f.x == 0.0 && f.y == 0.0));
    }

    PointSceneOptions narrow;
    narrow.half_width = 30.0;
    CHECK_THROWS_AS(make_point_scene(p, narrow), GeometryError);

    const auto path = tmp("scene.txt").string();
    write_scene(path, s);
    const Scene back = read_scene(path);
    REQUIRE(back.targets.size() == s.targets.size());
    REQUIRE(back.false_targets.size() == s.false_targets.size());
    for (size_t i = 0; i < s.targets.size(); ++i) {
        CHECK(back.targets[i].x == s.targets[i].x);
        CHECK(back.targets[i].y == s.targets[i].y);
    }
    CHECK(back.half_width == s.half_width);
    CHECK_THROWS_AS(read_scene(tmp("absent.txt").string()), IoError);
}

TEST_CASE("distributed scene from images") {
    RadarParams p;
    DistributedSceneOptions o;
    o.half_width = 40.0;
    o.false_center_x = -5.0;
    o.false_center_y = -10.0;

    const MatrixXd gray = MatrixXd::Constant(8, 6, 0.5);
    const Scene s = make_distributed_scene(gray, MatrixXd::Ones(3, 3), p, o);
    CHECK(s.targets.size() == 48);
    for (const auto& t : s.targets) CHECK(t.amplitude == 0.5);
    double cx = 0.0, cy = 0.0;
    for (const auto& t : s.targets) {
        cx += t.x;
        cy += t.y;
    }
    CHECK(std::abs(cx) < 1e-9);
    CHECK(std::abs(cy) < 1e-9);

    double fx = 0.0, fy = 0.0;
    for (const auto& f : s.false_targets) {
        fx += f.x / s.false_targets.size();
        fy += f.y / s.false_targets.size();
    }
    CHECK(fx == doctest::Approx(-5.0));
    CHECK(fy == doctest::Approx(-10.0));
    CHECK(s.jammer_position.x == -5.0);

    MatrixXd board(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) board(r, c) = (r + c) % 2;
    const auto path = tmp("board.pgm").string();
    write_grayscale_pgm(path, board);
    const MatrixXd back = read_grayscale(path);
    CHECK(back == board);
    CHECK(back.mean() == doctest::Approx(0.5));
    const Scene sb = make_distributed_scene(path, path, p, o);
    CHECK(sb.targets.size() == 32);

    {
        std::ofstream f(tmp("ascii.pgm"));
        f << "P2\n# comment\n2 1\n255\n0 255\n";
    }
    const MatrixXd ascii = read_grayscale(tmp("ascii.pgm").string());
    CHECK(ascii(0, 0) == 0.0);
    CHECK(ascii(0, 1) == 1.0);

    CHECK_THROWS_AS(make_distributed_scene(MatrixXd(), MatrixXd::Ones(1, 1), p, o), DimensionError);
    o.false_center_y = -500.0;
    CHECK_THROWS_AS(make_distributed_scene(gray, MatrixXd::Ones(1, 1), p, o), GeometryError);
    CHECK_THROWS_AS(read_grayscale(tmp("absent.pgm").string()), IoError);
}

TEST_CASE("synthetic scenes are deterministic") {
    const MatrixXd a = synthetic_reflectivity(32, 7);
    CHECK(a == synthetic_reflectivity(32, 7));
    CHECK(a != synthetic_reflectivity(32, 8));
    CHECK(a.minCoeff() >= 0.0);
    const MatrixXd patch = synthetic_port_patch(16);
    CHECK(patch.rows() == 16);
    CHECK(patch.maxCoeff() > 0.0);
}

TEST_CASE("image pgm uses a 40 dB display range") {
    SarImage img;
    img.pixels = MatrixXcd::Zero(1, 3);
    img.pixels(0, 0) = 1.0;
    img.pixels(0, 1) = 0.1;    // -20 dB
    img.pixels(0, 2) = 1e-3;   // below the floor
    const auto path = tmp("img.pgm").string();
    write_image_pgm(path, img);
    std::ifstream f(path, std::ios::binary);
    std::string magic;
    int w, h, maxval;
    f >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(maxval == 65535);
    const MatrixXd v = read_grayscale(path);
    CHECK(v(0, 0) == 1.0);
    CHECK(v(0, 1) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(v(0, 2) == 0.0);
    CHECK_THROWS_AS(write_image_pgm(path, img, 0.0), ParameterError);
}

TEST_CASE("point mask") {
    RadarParams p;
    const SarImage img = image_of(single_point(0.0, 0.0), VectorXd::Zero(64), p);
    const MaskMatrix m = point_mask(img, p, {{0.0, 0.0, 1.0}}, 2, 3);
    CHECK(m.count() == 5 * 7);
    Eigen::Index r, c;
    img.pixels.cwiseAbs().maxCoeff(&r, &c);
    CHECK(m(r, c));
}

}  // TEST_SUITE
