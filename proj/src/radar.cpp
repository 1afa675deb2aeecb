#include "sarjam/radar.hpp"

#include <cmath>
#include <string>

#include "sarjam/errors.hpp"

namespace sarjam {

Eigen::VectorXd RadarParams::slow_times() const {
    Eigen::VectorXd t(n_pulses);
    for (int i = 0; i < n_pulses; ++i) t[i] = slow_time(i);
    return t;
}

int RadarParams::pulse_samples() const {
    return static_cast<int>(std::lround(pulse_width * sample_rate));
}

double RadarParams::center_ground_range() const {
    return std::sqrt(center_range * center_range - altitude * altitude);
}

double RadarParams::closest_range(double ground_offset) const {
    const double g = center_ground_range() + ground_offset;
    return std::sqrt(g * g + altitude * altitude);
}

double RadarParams::azimuth_fm_rate() const {
    return 2.0 * speed * speed / (wavelength() * center_range);
}

void RadarParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParameterError(std::string(name) + " must be positive and finite");
    };
    positive(carrier_freq, "carrier_freq");
    positive(bandwidth, "bandwidth");
    positive(pulse_width, "pulse_width");
    positive(prt, "prt");
    positive(sample_rate, "sample_rate");
    positive(speed, "speed");
    positive(center_range, "center_range");
    positive(altitude, "altitude");
    if (n_pulses < 1) throw ParameterError("n_pulses must be >= 1");
    if (sample_rate < bandwidth)
        throw ParameterError("Nyquist rule violated: sample_rate must be >= bandwidth");
    if (pulse_width >= prt) throw ParameterError("pulse_width must be shorter than prt");
    if (altitude >= center_range)
        throw ParameterError("altitude must be below the center slant range");
    if (pulse_samples() < 2) throw ParameterError("pulse needs at least 2 samples");
}

}  // namespace sarjam
