#include "sarjam/signal_model.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "sarjam/errors.hpp"

namespace sarjam {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void require_length(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want)
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                             ", got " + std::to_string(got));
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

// Accumulates A*exp(j*theta)*exp(j*pi*K*(t_j - tau)^2) into column `out` for
// every raw sample whose time lies inside the pulse. The quadratic phase is
// advanced by a second-order phasor recurrence, re-anchored periodically.
void add_chirp(Eigen::Ref<VectorXcd> out, double t_start, double tau, double amp, double theta,
               const RadarParams& p) {
    const double fs = p.sample_rate;
    const double dt = 1.0 / fs;
    const double half = 0.5 * p.pulse_width;
    const double k = p.chirp_rate();
    const Eigen::Index n = out.size();
    Eigen::Index lo = static_cast<Eigen::Index>(std::ceil((tau - half - t_start) * fs - 1e-9));
    Eigen::Index hi = static_cast<Eigen::Index>(std::ceil((tau + half - t_start) * fs - 1e-9));
    lo = std::max<Eigen::Index>(lo, 0);
    hi = std::min<Eigen::Index>(hi, n);
    const cd base = std::polar(amp, theta);
    constexpr Eigen::Index kAnchor = 128;
    const cd step2 = std::polar(1.0, kTwoPi * k * dt * dt);
    cd value, rot;
    for (Eigen::Index j = lo; j < hi; ++j) {
        const Eigen::Index off = j - lo;
        if (off % kAnchor == 0) {
            const double d = t_start + j * dt - tau;
            value = std::polar(1.0, kPi * k * d * d);
            rot = std::polar(1.0, kPi * k * (2.0 * d * dt + dt * dt));
        }
        out[j] += base * value;
        value *= rot;
        rot *= step2;
    }
}

}  // namespace

VectorXcd generate_lfm_pc_pulse(const RadarParams& params, double phase) {
    params.validate();
    const int m = params.pulse_samples();
    const double k = params.chirp_rate();
    VectorXcd out(m);
    for (int i = 0; i < m; ++i) {
        const double t = -0.5 * params.pulse_width + i / params.sample_rate;
        out[i] = std::polar(1.0, kPi * k * t * t + phase);
    }
    return out;
}

cd azimuth_sample(double range, double phase, const RadarParams& params) {
    const double lambda = params.wavelength();
    const double tau = 2.0 * range / kLightSpeed;
    const double arg = -4.0 * kPi * range / lambda + kPi * params.chirp_rate() * tau * tau + phase;
    return std::polar(1.0, arg);
}

VectorXcd build_target_sequence(const VectorXd& ranges, const VectorXd& phases,
                                const RadarParams& params) {
    require_length(phases.size(), ranges.size(), "build_target_sequence phases");
    require_length(ranges.size(), params.n_pulses, "build_target_sequence trajectory");
    VectorXcd s(ranges.size());
    for (Eigen::Index i = 0; i < ranges.size(); ++i)
        s[i] = azimuth_sample(ranges[i], phases[i], params);
    return s;
}

VectorXd hyperbolic_trajectory(const RadarParams& params, double azimuth) {
    return hyperbolic_trajectory(params, azimuth, params.center_range);
}

VectorXd hyperbolic_trajectory(const RadarParams& params, double azimuth, double closest_range) {
    VectorXd r(params.n_pulses);
    for (int i = 0; i < params.n_pulses; ++i) {
        const double along = params.speed * params.slow_time(i) - azimuth;
        r[i] = std::sqrt(closest_range * closest_range + along * along);
    }
    return r;
}

VectorXcd azimuth_reference(const RadarParams& params) {
    const VectorXd r = hyperbolic_trajectory(params, 0.0);
    const double lambda = params.wavelength();
    VectorXcd u(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
        u[i] = std::polar(1.0, -4.0 * kPi * (r[i] - params.center_range) / lambda);
    return u;
}

PhaseCode make_phase_code(const VectorXd& phases, const VectorXd& ranges,
                          const RadarParams& params) {
    return {phases, build_target_sequence(ranges, phases, params)};
}

VectorXd random_phases(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = dist(rng);
    return phi;
}

double wrap_phase(double phase) {
    double w = std::fmod(phase, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

VectorXd extract_phases(const VectorXcd& sequence, const RadarParams& params) {
    const double rc = params.center_range;
    const double tau = 2.0 * rc / kLightSpeed;
    const double offset = std::fmod(4.0 * kPi * rc / params.wavelength(), kTwoPi) -
                          std::fmod(kPi * params.chirp_rate() * tau * tau, kTwoPi);
    VectorXd phi(sequence.size());
    for (Eigen::Index i = 0; i < sequence.size(); ++i)
        phi[i] = wrap_phase(std::arg(sequence[i]) + offset);
    return phi;
}

JammerModel JammerModel::uniform(int n_pulses, double power_db, double range_offset,
                                 double delay_fraction) {
    JammerModel jam;
    jam.delay_fraction = delay_fraction;
    jam.amplitudes = VectorXd::Constant(n_pulses, std::pow(10.0, power_db / 20.0));
    jam.range_offsets = VectorXd::Constant(n_pulses, range_offset);
    jam.code_lag = lag_for_delay(delay_fraction);
    return jam;
}

int JammerModel::lag_for_delay(double delay_fraction) {
    if (!(delay_fraction >= 0.0) || !std::isfinite(delay_fraction))
        throw ParameterError("jammer delay fraction must be non-negative");
    return -static_cast<int>(std::ceil(delay_fraction));
}

void JammerModel::validate(int n_pulses) const {
    require_length(amplitudes.size(), n_pulses, "jammer amplitudes");
    require_length(range_offsets.size(), n_pulses, "jammer range offsets");
    if (code_lag > 0) throw ParameterError("jammer cannot replay a pulse it has not received");
    if ((amplitudes.array() < 0.0).any()) throw ParameterError("jammer amplitudes must be >= 0");
}

VectorXcd jammer_gain(const JammerModel& jam, const RadarParams& params) {
    const int n = params.n_pulses;
    jam.validate(n);
    const double lambda = params.wavelength();
    VectorXcd g = VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int m = i + jam.code_lag;
        if (m < 0 || m >= n) continue;
        g[i] = std::polar(jam.amplitudes[i], -4.0 * kPi * jam.range_offsets[i] / lambda);
    }
    return g;
}

VectorXcd code_differential(const VectorXd& phases, int lag) {
    const Eigen::Index n = phases.size();
    VectorXcd c = VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index m = i + lag;
        if (m < 0 || m >= n) continue;
        c[i] = std::polar(1.0, phases[m] - phases[i]);
    }
    return c;
}

VectorXd phases_from_differential(const VectorXcd& differential, int lag) {
    const Eigen::Index n = differential.size();
    VectorXd phi = VectorXd::Zero(n);
    if (lag >= 0) return phi;
    for (Eigen::Index i = -lag; i < n; ++i) {
        const double a = std::abs(differential[i]) > 0.0 ? std::arg(differential[i]) : 0.0;
        phi[i] = wrap_phase(phi[i + lag] - a);
    }
    return phi;
}

JammerResponse jammer_response(const JammerModel& jam, const VectorXd& phases,
                               const RadarParams& params) {
    require_length(phases.size(), params.n_pulses, "jammer_response code");
    const VectorXcd g = jammer_gain(jam, params);
    return {g.cwiseProduct(code_differential(phases, jam.code_lag))};
}

MatrixXcd replay_operator(const JammerModel& jam, const VectorXcd& reference,
                          const RadarParams& params) {
    const int n = params.n_pulses;
    require_length(reference.size(), n, "replay_operator reference");
    const VectorXcd g = jammer_gain(jam, params);
    MatrixXcd t = MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int m = i + jam.code_lag;
        if (m < 0 || m >= n) continue;
        t(i, m) = g[i] * reference[i] / reference[m];
    }
    return t;
}

MatrixXcd build_extension_matrix(const VectorXcd& seq) {
    const Eigen::Index n = seq.size();
    if (n == 0) throw DimensionError("extension matrix of an empty sequence");
    MatrixXcd m = MatrixXcd::Zero(2 * n - 1, n);
    for (Eigen::Index k = 0; k < 2 * n - 1; ++k)
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index j = i + n - 1 - k;
            if (j >= 0 && j < n) m(k, i) = std::conj(seq[j]);
        }
    return m;
}

int raw_sample_count(const RadarParams& params, double half_width) {
    if (!(half_width > 0.0)) throw ParameterError("scene half-width must be positive");
    const double window = 4.0 * half_width / kLightSpeed + params.pulse_width;
    return static_cast<int>(std::ceil(window * params.sample_rate - 1e-9));
}

int range_bin_count(const RadarParams& params, double half_width) {
    return raw_sample_count(params, half_width) - params.pulse_samples() + 1;
}

EchoMatrix simulate_raw_echo(const std::vector<PointScatterer>& targets,
                             const std::vector<PointScatterer>& false_targets,
                             const PointScatterer& jammer_position, const JammerModel& jam,
                             const VectorXd& phases, const RadarParams& params,
                             const EchoOptions& options) {
    params.validate();
    const int n = params.n_pulses;
    require_length(phases.size(), n, "simulate_raw_echo code");
    if (!false_targets.empty()) jam.validate(n);

    const double w = options.half_width;
    const int rows = raw_sample_count(params, w);
    const double t_start = 2.0 * (params.center_range - w) / kLightSpeed - 0.5 * params.pulse_width;
    const double r_lo = params.center_range - w - 1e-9;
    const double r_hi = params.center_range + w + 1e-9;
    const double lambda = params.wavelength();

    EchoMatrix echo;
    echo.data = MatrixXcd::Zero(rows, n);
    echo.near_range = 0.5 * kLightSpeed * t_start;
    echo.range_spacing = params.range_bin();

    auto check_range = [&](double r) {
        if (r < r_lo || r > r_hi)
            throw GeometryError("scatterer range " + std::to_string(r) +
                                " m lies outside the receive window");
    };

    std::vector<double> target_r0(targets.size());
    for (size_t q = 0; q < targets.size(); ++q) target_r0[q] = params.closest_range(targets[q].y);

    const double jam_r0 = params.closest_range(jammer_position.y);
    std::vector<double> fake_dr(false_targets.size()), fake_fd(false_targets.size());
    for (size_t q = 0; q < false_targets.size(); ++q) {
        fake_dr[q] = params.closest_range(false_targets[q].y) - jam_r0;
        fake_fd[q] = 2.0 * params.speed * (false_targets[q].x - jammer_position.x) / (lambda * jam_r0);
    }

    for (int p = 0; p < n; ++p) {
        const double ta = params.slow_time(p);
        auto col = echo.data.col(p);
        for (size_t q = 0; q < targets.size(); ++q) {
            const auto& sc = targets[q];
            if (sc.amplitude < 0.0) throw ParameterError("scatterer amplitude must be >= 0");
            const double along = params.speed * ta - sc.x;
            const double r = std::sqrt(target_r0[q] * target_r0[q] + along * along);
            check_range(r);
            const double tau = 2.0 * r / kLightSpeed;
            add_chirp(col, t_start, tau, sc.amplitude, -4.0 * kPi * r / lambda + phases[p], params);
        }
        const int m = p + jam.code_lag;
        if (false_targets.empty() || m < 0 || m >= n) continue;
        const double along = params.speed * ta - jammer_position.x;
        const double rj = std::sqrt(jam_r0 * jam_r0 + along * along);
        for (size_t q = 0; q < false_targets.size(); ++q) {
            const double r = rj + fake_dr[q] + jam.range_offsets[p];
            check_range(r);
            const double tau = 2.0 * r / kLightSpeed;
            const double theta = -4.0 * kPi * r / lambda + 2.0 * kPi * fake_fd[q] * ta + phases[m];
            add_chirp(col, t_start, tau, jam.amplitudes[p] * false_targets[q].amplitude, theta,
                      params);
        }
    }

    if (std::isfinite(options.snr_db)) {
        const double sigma = std::sqrt(0.5 * std::pow(10.0, -options.snr_db / 10.0));
        std::mt19937_64 rng(options.noise_seed);
        std::normal_distribution<double> gauss(0.0, sigma);
        for (Eigen::Index c = 0; c < echo.data.cols(); ++c)
            for (Eigen::Index r = 0; r < echo.data.rows(); ++r) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                echo.data(r, c) += cd(re, im);
            }
    }
    return echo;
}

EchoMatrix range_pulse_compress(const EchoMatrix& echo, const RadarParams& params) {
    params.validate();
    const VectorXcd ref = generate_lfm_pc_pulse(params, 0.0);
    const int m = static_cast<int>(ref.size());
    const int rows = static_cast<int>(echo.rows());
    if (echo.compressed) throw DimensionError("echo is already range-compressed");
    if (rows < m) throw DimensionError("echo shorter than one pulse");
    const int bins = rows - m + 1;
    const int len = rows + m;

    detail::Fft fwd(len, false), inv(len, true);
    VectorXcd ref_spec(len);
    {
        cd* b = fwd.data();
        std::fill(b, b + len, cd(0.0));
        for (int i = 0; i < m; ++i) b[i] = ref[i];
        fwd.run();
        for (int i = 0; i < len; ++i) ref_spec[i] = std::conj(b[i]);
    }

    EchoMatrix out;
    out.data = MatrixXcd::Zero(bins, echo.cols());
    out.near_range = echo.near_range + 0.25 * kLightSpeed * params.pulse_width;
    out.range_spacing = echo.range_spacing;
    out.compressed = true;
    for (Eigen::Index c = 0; c < echo.cols(); ++c) {
        cd* b = fwd.data();
        std::fill(b, b + len, cd(0.0));
        for (int i = 0; i < rows; ++i) b[i] = echo.data(i, c);
        fwd.run();
        cd* bi = inv.data();
        for (int i = 0; i < len; ++i) bi[i] = b[i] * ref_spec[i];
        inv.run();
        for (int k = 0; k < bins; ++k) out.data(k, c) = bi[k] / static_cast<double>(len);
    }
    return out;
}

EchoMatrix rcmc(const EchoMatrix& compressed, const RadarParams& params, Interpolation mode) {
    const int rows = static_cast<int>(compressed.rows());
    const int n = static_cast<int>(compressed.cols());
    if (n != params.n_pulses) throw DimensionError("rcmc: pulse count mismatch");
    const double lambda = params.wavelength();

    MatrixXcd rd(rows, n);
    {
        detail::Fft fwd(n, false);
        for (int r = 0; r < rows; ++r) {
            cd* b = fwd.data();
            for (int i = 0; i < n; ++i) b[i] = compressed.data(r, i);
            fwd.run();
            for (int i = 0; i < n; ++i) rd(r, i) = b[i];
        }
    }

    MatrixXcd shifted = MatrixXcd::Zero(rows, n);
    for (int q = 0; q < n; ++q) {
        const int signed_q = q < (n + 1) / 2 ? q : q - n;
        const double fa = signed_q * params.prf() / n;
        const double sq = lambda * fa / (2.0 * params.speed);
        const double stretch = 1.0 / std::sqrt(1.0 - sq * sq) - 1.0;
        for (int k = 0; k < rows; ++k) {
            const double r0 = compressed.range_at(k);
            const double pos = k + r0 * stretch / compressed.range_spacing;
            cd acc(0.0);
            if (mode == Interpolation::kNearest) {
                const long idx = std::lround(pos);
                if (idx >= 0 && idx < rows) acc = rd(idx, q);
            } else {
                const long base = static_cast<long>(std::floor(pos));
                for (long t = base - 3; t <= base + 4; ++t) {
                    if (t < 0 || t >= rows) continue;
                    acc += rd(t, q) * sinc(pos - static_cast<double>(t));
                }
            }
            shifted(k, q) = acc;
        }
    }

    EchoMatrix out = compressed;
    detail::Fft inv(n, true);
    for (int r = 0; r < rows; ++r) {
        cd* b = inv.data();
        for (int i = 0; i < n; ++i) b[i] = shifted(r, i);
        inv.run();
        for (int i = 0; i < n; ++i) out.data(r, i) = b[i] / static_cast<double>(n);
    }
    return out;
}

EchoMatrix compensate_code(const EchoMatrix& echo, const VectorXd& phases) {
    require_length(phases.size(), echo.cols(), "compensate_code phases");
    EchoMatrix out = echo;
    for (Eigen::Index c = 0; c < echo.cols(); ++c) out.data.col(c) *= std::polar(1.0, -phases[c]);
    return out;
}

void write_sare(const std::string& path, const MatrixXcd& m) {
    static_assert(std::endian::native == std::endian::little, "SARE writer assumes little-endian");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write("SARE", 4);
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
    f.write(reinterpret_cast<const char*>(&rows), 4);
    f.write(reinterpret_cast<const char*>(&cols), 4);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v[2] = {m(r, c).real(), m(r, c).imag()};
            f.write(reinterpret_cast<const char*>(v), sizeof v);
        }
    if (!f) throw IoError("write failed: " + path);
}

MatrixXcd read_sare(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    char magic[4];
    std::uint32_t rows = 0, cols = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&rows), 4);
    f.read(reinterpret_cast<char*>(&cols), 4);
    if (!f || std::string(magic, 4) != "SARE") throw IoError(path + " is not a SARE file");
    MatrixXcd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            double v[2];
            f.read(reinterpret_cast<char*>(v), sizeof v);
            m(r, c) = cd(v[0], v[1]);
        }
    if (!f) throw IoError(path + " is truncated");
    return m;
}

namespace {
void write_header(std::ostream& os, const std::string& header) {
    if (header.empty()) return;
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_complex_csv(const std::string& path, const MatrixXcd& m, const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_header(f, header);
    f << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            f << r << ',' << c << ',' << fmt(m(r, c).real()) << ',' << fmt(m(r, c).imag()) << '\n';
}

void write_complex_csv(const std::string& path, const VectorXcd& v, const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_header(f, header);
    f << "re,im\n";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        f << fmt(v[i].real()) << ',' << fmt(v[i].imag()) << '\n';
}

VectorXcd read_complex_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MissingArtifactError("missing artifact " + path);
    std::vector<cd> vals;
    std::string line;
    bool saw_header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            if (line != "re,im") throw IoError(path + ": expected re,im columns");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError(path + ": malformed line");
        vals.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    VectorXcd v(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
    return v;
}

}  // namespace sarjam
