#pragma once

#include <complex>
#include <fftw3.h>
#include <mutex>
#include <vector>

#include "hermop/errors.hpp"

namespace hermop {

namespace detail {

// FFTW planning is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

/// Unnormalized complex 1-D FFT of fixed length (FFTW backend, own buffer).
class Fft1d {
public:
    explicit Fft1d(int n) : n_(n), buf_(static_cast<std::size_t>(n)) {
        if (n_ < 1)
            throw ValidationError("Fft1d: length must be >= 1");
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        auto* data = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_1d(n_, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n_, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_)
            throw NumericError("Fft1d: planning failed");
    }

    ~Fft1d() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;

    int size() const { return n_; }

    /// In-place forward transform (kernel e^{-2 pi i k j / n}).
    void forward(std::complex<double>* data) { run(fwd_, data); }

    /// In-place unnormalized inverse (kernel e^{+2 pi i k j / n}).
    void backward(std::complex<double>* data) { run(bwd_, data); }

private:
    void run(fftw_plan plan, std::complex<double>* data) {
        for (int i = 0; i < n_; ++i)
            buf_[static_cast<std::size_t>(i)] = data[i];
        auto* raw = reinterpret_cast<fftw_complex*>(buf_.data());
        fftw_execute_dft(plan, raw, raw);
        for (int i = 0; i < n_; ++i)
            data[i] = buf_[static_cast<std::size_t>(i)];
    }

    int n_;
    std::vector<std::complex<double>> buf_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

/// Unnormalized complex 2-D FFT; data layout axis1-fastest (v[i1 + n1*i2]),
/// which FFTW sees as row-major (n2, n1).
class Fft2d {
public:
    Fft2d(int n1, int n2)
        : n1_(n1), n2_(n2),
          buf_(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2)) {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        auto* data = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_2d(n2_, n1_, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(n2_, n1_, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_)
            throw NumericError("Fft2d: planning failed");
    }

    ~Fft2d() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    void forward(std::complex<double>* data) { run(fwd_, data); }
    void backward(std::complex<double>* data) { run(bwd_, data); }

private:
    void run(fftw_plan plan, std::complex<double>* data) {
        const std::size_t total = buf_.size();
        for (std::size_t i = 0; i < total; ++i)
            buf_[i] = data[i];
        auto* raw = reinterpret_cast<fftw_complex*>(buf_.data());
        fftw_execute_dft(plan, raw, raw);
        for (std::size_t i = 0; i < total; ++i)
            data[i] = buf_[i];
    }

    int n1_, n2_;
    std::vector<std::complex<double>> buf_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

/// Signed FFT bin frequency 2 pi p~ / L with p~ in [-n/2, n/2).
inline double signed_frequency(int p, int n, double period) {
    const int ps = p < n / 2 ? p : p - n;
    return 2.0 * M_PI * ps / period;
}

} // namespace hermop
