#pragma once

#include <cmath>
#include <random>

#include "sarjam/signal_model.hpp"

namespace testutil {

using sarjam::cd;

inline Eigen::VectorXcd random_complex(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cd(g(rng), g(rng));
    return v;
}

inline Eigen::VectorXcd random_unimodular(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * sarjam::kPi);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = std::polar(1.0, u(rng));
    return v;
}

inline Eigen::VectorXcd random_sphere(int n, std::mt19937_64& rng) {
    Eigen::VectorXcd v = random_complex(n, rng);
    return std::sqrt(static_cast<double>(n)) * v / v.norm();
}

// sum_i conj(seq[i + lag]) * v[i] for lag in [-(N-1), N-1], lag zero first at N-1.
inline Eigen::VectorXcd brute_correlation(const Eigen::VectorXcd& seq, const Eigen::VectorXcd& v) {
    const int n = static_cast<int>(seq.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * n - 1);
    for (int k = 0; k < 2 * n - 1; ++k) {
        const int lag = n - 1 - k;
        for (int i = 0; i < n; ++i) {
            const int j = i + lag;
            if (j >= 0 && j < n) out[k] += std::conj(seq[j]) * v[i];
        }
    }
    return out;
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testutil
