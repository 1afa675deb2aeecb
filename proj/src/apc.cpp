#include "sarjam/apc.hpp"

#include <string>

#include "sarjam/errors.hpp"

namespace sarjam {

ApcCode ApcCode::with_shift(int n_pulses, double doppler_bins) {
    if (n_pulses < 1) throw ParameterError("APC code needs N >= 1");
    return {doppler_bins / n_pulses, n_pulses};
}

double apc_encode(const ApcCode& code, int pulse_index) {
    if (pulse_index < 0 || pulse_index >= code.n_pulses)
        throw DimensionError("APC pulse index " + std::to_string(pulse_index) + " out of range");
    const double n = pulse_index;
    return kPi * code.mu * n * n;
}

VectorXd ApcCode::encode_phases() const {
    VectorXd phi(n_pulses);
    for (int i = 0; i < n_pulses; ++i) phi[i] = apc_encode(*this, i);
    return phi;
}

double apc_predicted_shift_bins(const ApcCode& code, int lag) {
    // phi(n + L) - phi(n) = pi mu (2 L n + L^2): 2 pi * (mu L) per pulse.
    return code.mu * lag * code.n_pulses;
}

}  // namespace sarjam
