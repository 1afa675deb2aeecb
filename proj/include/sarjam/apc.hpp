#pragma once

#include "sarjam/signal_model.hpp"

namespace sarjam {

// Quadratic azimuth phase coding phi(n) = pi * mu * n^2. A jammer replaying
// with lag L is left with a residual that is linear in n, i.e. a Doppler
// offset of -L * mu * PRF.
struct ApcCode {
    double mu = 0.0;
    int n_pulses = 0;

    static ApcCode with_shift(int n_pulses, double doppler_bins);
    VectorXd encode_phases() const;
    VectorXd decode_phases() const { return -encode_phases(); }
};

double apc_encode(const ApcCode& code, int pulse_index);

// Doppler offset (in bins of PRF/N) predicted for a lag-L replay.
double apc_predicted_shift_bins(const ApcCode& code, int lag);

}  // namespace sarjam
