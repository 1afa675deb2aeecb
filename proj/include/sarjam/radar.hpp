#pragma once

#include <Eigen/Dense>

namespace sarjam {

inline constexpr double kLightSpeed = 2.99792458e8;
inline constexpr double kPi = 3.14159265358979323846;

// Platform and waveform constants. Defaults are the full-size experiment
// values, with a desk-sized pulse count.
struct RadarParams {
    double carrier_freq = 4e9;
    double bandwidth = 200e6;
    double pulse_width = 5e-6;
    double prt = 8e-3;
    double sample_rate = 200e6;
    double speed = 100.0;
    double center_range = 4000.0;
    double altitude = 2000.0;
    int n_pulses = 64;

    double chirp_rate() const { return bandwidth / pulse_width; }
    double wavelength() const { return kLightSpeed / carrier_freq; }
    double aperture_time() const { return n_pulses * prt; }
    double prf() const { return 1.0 / prt; }

    // Slow time of pulse i, measured from the aperture center.
    double slow_time(int i) const { return (i - 0.5 * (n_pulses - 1)) * prt; }
    Eigen::VectorXd slow_times() const;

    int pulse_samples() const;  // round(T_r * f_s)
    double range_bin() const { return kLightSpeed / (2.0 * sample_rate); }
    double azimuth_bin() const { return speed * prt; }

    // Ground range of the scene center and slant range of a scatterer at a
    // ground-range offset y (flat earth, broadside geometry).
    double center_ground_range() const;
    double closest_range(double ground_offset) const;

    // Azimuth FM rate at the scene center, Hz/s.
    double azimuth_fm_rate() const;

    // Throws ParameterError naming the violated rule.
    void validate() const;
};

}  // namespace sarjam
