#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <limits>

#include "helpers.hpp"
#include "sarjam/errors.hpp"
#include "sarjam/signal_model.hpp"

using namespace sarjam;
using testutil::cd;

TEST_SUITE("signal_model") {

TEST_CASE("radar parameters derive chirp rate and wavelength") {
    RadarParams p;
    CHECK(p.chirp_rate() == doctest::Approx(4.0e13).epsilon(1e-15));
    CHECK(p.chirp_rate() * p.pulse_width == doctest::Approx(p.bandwidth).epsilon(1e-15));
    CHECK(p.wavelength() == doctest::Approx(kLightSpeed / 4e9));
    CHECK(p.pulse_samples() == 1000);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("radar validation rejects physical violations") {
    RadarParams p;
    p.sample_rate = 100e6;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("Nyquist"), ParameterError);
    p = RadarParams{};
    p.pulse_width = 1e-2;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = RadarParams{};
    p.n_pulses = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = RadarParams{};
    p.speed = -1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("lfm pulse") {
    RadarParams p;
    const VectorXcd pulse = generate_lfm_pc_pulse(p, 0.0);
    REQUIRE(pulse.size() == 1000);
    // t = 0 is sample 500 of [-T/2, T/2).
    CHECK(std::abs(pulse[500] - cd(1.0, 0.0)) < 1e-12);
    CHECK((pulse.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);

    const VectorXcd coded = generate_lfm_pc_pulse(p, kPi / 2);
    const double t = p.pulse_width / 4;  // sample 750
    const double expect = kPi * p.chirp_rate() * t * t + kPi / 2;
    CHECK(std::abs(coded[750] - std::polar(1.0, expect)) < 1e-9);
    // Phase coding does not change pulse energy.
    CHECK(std::abs(coded.squaredNorm() - pulse.squaredNorm()) < 1e-9);

    RadarParams bad;
    bad.sample_rate = 150e6;
    CHECK_THROWS_AS(generate_lfm_pc_pulse(bad, 0.0), ParameterError);
}

TEST_CASE("azimuth sample phase") {
    RadarParams p;
    CHECK(std::abs(azimuth_sample(0.0, 0.0, p) - cd(1.0, 0.0)) < 1e-15);

    const double lambda = p.wavelength();
    const double r = lambda / 8;
    const double tau = 2 * r / kLightSpeed;
    const cd expect = std::polar(1.0, -kPi / 2 + kPi * p.chirp_rate() * tau * tau);
    CHECK(std::abs(azimuth_sample(r, 0.0, p) - expect) < 1e-12);

    const double rc = 4000.0;
    const double t2 = 2 * rc / kLightSpeed;
    const double phase = std::fmod(-4 * kPi * rc / lambda + kPi * p.chirp_rate() * t2 * t2, 2 * kPi);
    CHECK(std::abs(azimuth_sample(rc, 0.0, p) - std::polar(1.0, phase)) < 1e-6);
    CHECK(std::abs(std::abs(azimuth_sample(rc, 1.3, p)) - 1.0) < 1e-12);
}

TEST_CASE("target sequence") {
    RadarParams p;
    p.n_pulses = 6;
    const VectorXcd ones = build_target_sequence(VectorXd::Zero(6), VectorXd::Zero(6), p);
    CHECK((ones - VectorXcd::Ones(6)).cwiseAbs().maxCoeff() < 1e-15);

    p.n_pulses = 32;
    const VectorXd r = hyperbolic_trajectory(p);
    const VectorXd phi = random_phases(32, 3);
    const VectorXcd s = build_target_sequence(r, phi, p);
    for (int i = 0; i < 32; ++i) {
        const double ta = (i - 15.5) * p.prt;
        CHECK(r[i] == doctest::Approx(std::sqrt(4000.0 * 4000.0 + 1e4 * ta * ta)).epsilon(1e-14));
        CHECK(std::abs(s[i] - azimuth_sample(r[i], phi[i], p)) < 1e-15);
        CHECK(std::abs(std::abs(s[i]) - 1.0) < 1e-12);
    }

    p.n_pulses = 1;
    const VectorXcd one = build_target_sequence(VectorXd::Constant(1, 4000.0), VectorXd::Zero(1), p);
    CHECK(std::abs(one[0] - azimuth_sample(4000.0, 0.0, p)) < 1e-15);

    p.n_pulses = 4;
    CHECK_THROWS_AS(build_target_sequence(VectorXd::Zero(3), VectorXd::Zero(3), p), DimensionError);
    CHECK_THROWS_AS(build_target_sequence(VectorXd::Zero(4), VectorXd::Zero(3), p), DimensionError);
}

TEST_CASE("random phases are seeded and in range") {
    const VectorXd a = random_phases(100, 11);
    const VectorXd b = random_phases(100, 11);
    const VectorXd c = random_phases(100, 12);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() < 2 * kPi);
}

TEST_CASE("extract phases inverts the sequence model at the reference range") {
    RadarParams p;
    p.n_pulses = 16;
    const VectorXd phi = random_phases(16, 9);
    const VectorXcd s = build_target_sequence(VectorXd::Constant(16, p.center_range), phi, p);
    const VectorXd back = extract_phases(s, p);
    for (int i = 0; i < 16; ++i) {
        const double d = std::remainder(back[i] - phi[i], 2 * kPi);
        CHECK(std::abs(d) < 1e-6);
    }
}

TEST_CASE("jammer response") {
    RadarParams p;
    p.n_pulses = 8;
    JammerModel jam = JammerModel::uniform(8, 0.0);
    jam.code_lag = 0;
    const VectorXd phi = random_phases(8, 4);
    const JammerResponse id = jammer_response(jam, phi, p);
    CHECK((id.xi - VectorXcd::Ones(8)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((id.matrix() - MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);

    // Identity jammer leaves the target sequence unchanged.
    const VectorXcd s = build_target_sequence(hyperbolic_trajectory(p), phi, p);
    CHECK((id.matrix() * s - s).cwiseAbs().maxCoeff() < 1e-15);

    jam.range_offsets.setConstant(p.wavelength() / 4);
    const JammerResponse flip = jammer_response(jam, phi, p);
    CHECK((flip.xi + VectorXcd::Ones(8)).cwiseAbs().maxCoeff() < 1e-12);

    const JammerModel nominal = JammerModel::uniform(8);
    CHECK(nominal.amplitudes[0] == doctest::Approx(std::pow(10.0, 0.04 / 20.0)));
    CHECK(nominal.code_lag == -1);

    // Lag -1: pulse i carries the code of pulse i-1, nothing to replay on pulse 0.
    const JammerResponse lagged = jammer_response(nominal, phi, p);
    CHECK(std::abs(lagged.xi[0]) == 0.0);
    for (int i = 1; i < 8; ++i) {
        const cd expect = nominal.amplitudes[i] * std::polar(1.0, phi[i - 1] - phi[i]);
        CHECK(std::abs(lagged.xi[i] - expect) < 1e-12);
    }

    CHECK(JammerModel::lag_for_delay(2.0 / 3.0) == -1);
    CHECK(JammerModel::lag_for_delay(1.5) == -2);
    CHECK(JammerModel::lag_for_delay(0.0) == 0);
    JammerModel future = nominal;
    future.code_lag = 1;
    CHECK_THROWS_AS(jammer_gain(future, p), ParameterError);
    JammerModel short_amp = nominal;
    short_amp.amplitudes = VectorXd::Ones(3);
    CHECK_THROWS_AS(jammer_response(short_amp, phi, p), DimensionError);
}

TEST_CASE("code differential round trip") {
    const VectorXd phi = random_phases(20, 5);
    for (int lag : {-1, -2, -3}) {
        const VectorXcd c = code_differential(phi, lag);
        const VectorXd back = phases_from_differential(c, lag);
        // The first |lag| phases are free; the chained ones match up to that offset.
        VectorXd anchored = phi;
        for (int i = 0; i < 20; ++i) {
            const int root = ((i % -lag) + -lag) % -lag;
            anchored[i] = phi[i] - phi[root];
        }
        for (int i = 0; i < 20; ++i)
            CHECK(std::abs(std::remainder(back[i] - anchored[i], 2 * kPi)) < 1e-9);
        CHECK((code_differential(back, lag) - c).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("replay operator reproduces the jammer response on chirp-consistent codes") {
    RadarParams p;
    p.n_pulses = 12;
    const JammerModel jam = JammerModel::uniform(12, 0.04, 0.3);
    const VectorXcd u = azimuth_reference(p);
    const MatrixXcd t = replay_operator(jam, u, p);
    const VectorXd phi = random_phases(12, 8);
    VectorXcd s(12);
    for (int i = 0; i < 12; ++i) s[i] = u[i] * std::polar(1.0, phi[i]);
    const VectorXcd xi = jammer_response(jam, phi, p).xi;
    CHECK((t * s - xi.cwiseProduct(s)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("extension matrix") {
    const VectorXcd one = VectorXcd::Constant(1, cd(2.0, -3.0));
    const MatrixXcd m1 = build_extension_matrix(one);
    REQUIRE(m1.rows() == 1);
    CHECK(m1(0, 0) == cd(2.0, 3.0));

    VectorXcd two(2);
    two << cd(1, 1), cd(2, -1);
    const MatrixXcd m2 = build_extension_matrix(two);
    REQUIRE(m2.rows() == 3);
    REQUIRE(m2.cols() == 2);
    // Row k holds the conjugated sequence shifted by lag N-1-k.
    CHECK(m2(0, 0) == std::conj(two[1]));
    CHECK(m2(0, 1) == cd(0.0));
    CHECK(m2(1, 0) == std::conj(two[0]));
    CHECK(m2(1, 1) == std::conj(two[1]));
    CHECK(m2(2, 0) == cd(0.0));
    CHECK(m2(2, 1) == std::conj(two[0]));

    CHECK_THROWS_AS(build_extension_matrix(VectorXcd()), DimensionError);

    std::mt19937_64 rng(42);
    for (int n : {3, 8, 16}) {
        for (int rep = 0; rep < 10; ++rep) {
            const VectorXcd seq = testutil::random_complex(n, rng);
            const VectorXcd v = testutil::random_complex(n, rng);
            const MatrixXcd m = build_extension_matrix(seq);
            const VectorXcd oracle = testutil::brute_correlation(seq, v);
            CHECK((m * v - oracle).norm() <= 1e-12 * oracle.norm());
            // Toeplitz: entry depends on k - i only.
            for (int k = 1; k < 2 * n - 1; ++k)
                for (int i = 1; i < n; ++i) CHECK(m(k, i) == m(k - 1, i - 1));
            // Swapping the roles keeps the correlation energy.
            CHECK(std::abs((m * v).norm() - (build_extension_matrix(v) * seq).norm()) <
                  1e-10 * (m * v).norm());
        }
    }
}

TEST_CASE("raw echo of a static scatterer") {
    RadarParams p;
    p.n_pulses = 4;
    p.speed = 1e-9;  // effectively static
    EchoOptions opt;
    opt.half_width = 20.0;
    opt.snr_db = std::numeric_limits<double>::infinity();
    const JammerModel jam = JammerModel::uniform(4);

    const EchoMatrix empty = simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(4), p, opt);
    CHECK(empty.rows() == raw_sample_count(p, 20.0));
    CHECK(empty.data.cwiseAbs().maxCoeff() == 0.0);

    const EchoMatrix e = simulate_raw_echo({{0.0, 0.0, 1.0}}, {}, {}, jam, VectorXd::Zero(4), p, opt);
    const double r = p.closest_range(0.0);
    const double tau = 2 * r / kLightSpeed;
    const double t_start = 2 * (p.center_range - 20.0) / kLightSpeed - p.pulse_width / 2;
    const int first = static_cast<int>(std::ceil((tau - p.pulse_width / 2 - t_start) * p.sample_rate - 1e-9));
    for (int col = 0; col < 4; ++col) {
        // Exactly pulse_samples nonzero samples starting at the delay.
        int nonzero = 0;
        for (Eigen::Index k = 0; k < e.rows(); ++k) nonzero += std::abs(e.data(k, col)) > 0.5;
        CHECK(nonzero == p.pulse_samples());
        CHECK(std::abs(e.data(first, col)) > 0.5);
        CHECK(std::abs(e.data(first - 1, col)) == 0.0);
        // Sample phase: -4 pi R / lambda plus the chirp phase at that offset.
        const double d = t_start + first / p.sample_rate - tau;
        const cd expect = std::polar(1.0, -4 * kPi * r / p.wavelength() + kPi * p.chirp_rate() * d * d);
        CHECK(std::abs(e.data(first, col) - expect) < 1e-6);
    }

    CHECK_THROWS_AS(simulate_raw_echo({{0.0, 100.0, 1.0}}, {}, {}, jam, VectorXd::Zero(4), p, opt),
                    GeometryError);
}

TEST_CASE("echo noise follows the configured SNR and seed") {
    RadarParams p;
    p.n_pulses = 8;
    EchoOptions opt;
    opt.half_width = 20.0;
    opt.snr_db = 10.0;
    opt.noise_seed = 3;
    const JammerModel jam = JammerModel::uniform(8);
    const EchoMatrix a = simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(8), p, opt);
    const EchoMatrix b = simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(8), p, opt);
    CHECK(a.data == b.data);
    const double power = a.data.cwiseAbs2().mean();
    CHECK(power == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("range compression peak and width") {
    RadarParams p;
    p.n_pulses = 1;
    p.sample_rate = 800e6;
    EchoOptions opt;
    opt.half_width = 15.0;
    opt.snr_db = std::numeric_limits<double>::infinity();
    const JammerModel jam = JammerModel::uniform(1);

    const EchoMatrix zero = range_pulse_compress(
        simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(1), p, opt), p);
    CHECK(zero.data.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.rows() == range_bin_count(p, 15.0));

    // Scatterer placed exactly on a bin: peak at that bin.
    const double bin = p.range_bin();
    const EchoMatrix raw0 = simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(1), p, opt);
    const EchoMatrix c0 = range_pulse_compress(raw0, p);
    const double target_range = c0.near_range + 17 * bin;
    const double g = std::sqrt(target_range * target_range - p.altitude * p.altitude) -
                     p.center_ground_range();
    const EchoMatrix c = range_pulse_compress(
        simulate_raw_echo({{0.0, g, 1.0}}, {}, {}, jam, VectorXd::Zero(1), p, opt), p);
    Eigen::Index peak = 0;
    const double mx = c.data.col(0).cwiseAbs().maxCoeff(&peak);
    CHECK(peak == 17);
    // Peak amplitude equals the sample count (T_r f_s) for a unit scatterer.
    CHECK(mx == doctest::Approx(p.pulse_samples()).epsilon(1e-6));

    // -3 dB width by linear interpolation of the magnitude.
    const VectorXd mag = c.data.col(0).cwiseAbs() / mx;
    const double half = std::sqrt(0.5);
    auto cross = [&](int dir) {
        int k = static_cast<int>(peak);
        while (mag[k + dir] >= half) k += dir;
        const double a = mag[k], b = mag[k + dir];
        return k + dir * (a - half) / (a - b);
    };
    const double width = (cross(1) - cross(-1)) * bin;
    const double expect = 0.886 * kLightSpeed / (2 * p.bandwidth);
    CHECK(std::abs(width - expect) / expect < 0.15);
}

TEST_CASE("range compression resolves two scatterers 2 m apart") {
    RadarParams p;
    p.n_pulses = 1;
    EchoOptions opt;
    opt.half_width = 15.0;
    opt.snr_db = std::numeric_limits<double>::infinity();
    const JammerModel jam = JammerModel::uniform(1);
    const double g2 = std::sqrt(std::pow(p.center_range + 2.0, 2) - p.altitude * p.altitude) -
                      p.center_ground_range();
    const EchoMatrix c = range_pulse_compress(
        simulate_raw_echo({{0, 0, 1}, {0, g2, 1}}, {}, {}, jam, VectorXd::Zero(1), p, opt), p);
    const VectorXd mag = c.data.col(0).cwiseAbs();
    int peaks = 0;
    for (Eigen::Index k = 1; k + 1 < mag.size(); ++k)
        if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] > 0.5 * mag.maxCoeff()) ++peaks;
    CHECK(peaks == 2);
}

TEST_CASE("rcmc straightens a migrating target") {
    // Fine range sampling and a long aperture so that the migration spans bins.
    RadarParams p;
    p.sample_rate = 800e6;
    p.bandwidth = 800e6;
    p.n_pulses = 200;
    p.prt = 1e-3;
    p.speed = 700.0;  // 140 m aperture, Doppler within the PRF
    EchoOptions opt;
    opt.half_width = 12.0;
    opt.snr_db = std::numeric_limits<double>::infinity();
    const JammerModel jam = JammerModel::uniform(p.n_pulses);
    const EchoMatrix c = range_pulse_compress(
        simulate_raw_echo({{0, 0, 1}}, {}, {}, jam, VectorXd::Zero(p.n_pulses), p, opt), p);

    // The outermost pulses carry edge effects of the Doppler-domain shift.
    auto spread = [](const EchoMatrix& m) {
        Eigen::Index lo = m.rows(), hi = -1;
        for (Eigen::Index col = 10; col + 10 < m.cols(); ++col) {
            Eigen::Index k;
            m.data.col(col).cwiseAbs().maxCoeff(&k);
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
        return hi - lo;
    };
    const VectorXd r = hyperbolic_trajectory(p);
    const double migration = r.maxCoeff() - r.minCoeff();
    const Eigen::Index expect = static_cast<Eigen::Index>(std::ceil(migration / p.range_bin() - 0.5));
    CHECK(spread(c) >= expect - 1);
    CHECK(spread(c) <= expect + 1);
    CHECK(spread(c) >= 2);
    CHECK(spread(rcmc(c, p)) == 0);
    CHECK(spread(rcmc(c, p, Interpolation::kNearest)) == 0);

    const EchoMatrix z = rcmc(range_pulse_compress(
        simulate_raw_echo({}, {}, {}, jam, VectorXd::Zero(p.n_pulses), p, opt), p), p);
    CHECK(z.data.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("code compensation restores pulse-to-pulse coherence") {
    RadarParams p;
    p.n_pulses = 32;
    p.speed = 1e-9;
    EchoOptions opt;
    opt.half_width = 15.0;
    opt.snr_db = std::numeric_limits<double>::infinity();
    const VectorXd phi = random_phases(32, 21);
    const JammerModel jam = JammerModel::uniform(32);
    const EchoMatrix c = range_pulse_compress(
        simulate_raw_echo({{0, 0, 1}}, {}, {}, jam, phi, p, opt), p);
    const EchoMatrix comp = compensate_code(c, phi);
    Eigen::Index k;
    comp.data.col(0).cwiseAbs().maxCoeff(&k);
    VectorXcd row = comp.data.row(k).transpose();
    // Static scatterer: the compensated row is constant, i.e. a single Doppler bin.
    const double dc = std::norm(row.sum()) / row.size();
    CHECK(dc / row.squaredNorm() >= 0.9);
    VectorXcd raw_row = c.data.row(k).transpose();
    CHECK(std::norm(raw_row.sum()) / raw_row.size() / raw_row.squaredNorm() < 0.5);
}

TEST_CASE("sare and csv round trips") {
    const auto dir = std::filesystem::temp_directory_path() / "sarjam_sm_io";
    std::filesystem::create_directories(dir);
    MatrixXcd m(3, 2);
    m << cd(1, 2), cd(-3, 0.5), cd(1e-300, -7), cd(0, 0), cd(3.14159, 2.71828), cd(-1, -1);
    const std::string bin = (dir / "m.bin").string();
    write_sare(bin, m);
    CHECK(read_sare(bin) == m);
    CHECK(std::filesystem::file_size(bin) == 12 + 3 * 2 * 16);
    {
        std::FILE* f = std::fopen(bin.c_str(), "rb");
        unsigned char head[12];
        REQUIRE(std::fread(head, 1, 12, f) == 12);
        std::fclose(f);
        CHECK(std::string(reinterpret_cast<char*>(head), 4) == "SARE");
        CHECK(head[4] == 3);
        CHECK(head[8] == 2);
    }

    std::mt19937_64 rng(1);
    const VectorXcd v = testutil::random_complex(17, rng);
    const std::string csv = (dir / "v.csv").string();
    write_complex_csv(csv, v, "config_hash=abc\nseed=1");
    CHECK(read_complex_csv(csv) == v);

    CHECK_THROWS_AS(read_complex_csv((dir / "absent.csv").string()), MissingArtifactError);
    CHECK_THROWS_AS(read_sare((dir / "absent.bin").string()), IoError);
}

}  // TEST_SUITE
