#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace sarjam::detail {

// Owns an FFTW plan and its buffer. Plan creation is serialized; execution on
// distinct instances is safe to run concurrently.
class Fft {
public:
    Fft(int n, bool inverse);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
    void run() { fftw_execute(plan_); }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

}  // namespace sarjam::detail
