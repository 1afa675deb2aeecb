#include "fft.hpp"

#include <mutex>

namespace sarjam::detail {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int n, bool inverse) : n_(n) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    buf_ = fftw_alloc_complex(static_cast<size_t>(n));
    plan_ = fftw_plan_dft_1d(n, buf_, buf_, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                             FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
}

}  // namespace sarjam::detail
