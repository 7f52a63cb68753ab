#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace wigsim {

/// Batched 1-D FFTs over the rows (p-axis, contiguous) and columns
/// (x-axis, strided) of a row-major nx-by-np complex array.
///
/// Plans use FFTW_ESTIMATE so planning is deterministic, and
/// FFTW_UNALIGNED so they run on any caller buffer. Transforms are
/// unnormalized (forward = sum e^{-i..}, backward = sum e^{+i..});
/// callers scale by 1/n once per round trip. Plan creation is guarded
/// by a global mutex; execution on distinct buffers is thread-safe.
class FftEngine {
  public:
    FftEngine(std::size_t nx, std::size_t np);
    ~FftEngine();
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    void forward_x(std::complex<double>* data) const;
    void backward_x(std::complex<double>* data) const;
    void forward_p(std::complex<double>* data) const;
    void backward_p(std::complex<double>* data) const;

    std::size_t nx() const { return nx_; }
    std::size_t np() const { return np_; }

  private:
    std::size_t nx_, np_;
    fftw_plan fwd_x_, bwd_x_, fwd_p_, bwd_p_;
};

/// In-place unnormalized 1-D transforms for scratch use (chirp products,
/// spectral interpolation). Size must not change between calls.
class Fft1d {
  public:
    explicit Fft1d(std::size_t n);
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;

    void forward(std::complex<double>* data) const;
    void backward(std::complex<double>* data) const;

  private:
    std::size_t n_;
    fftw_plan fwd_, bwd_;
};

}  // namespace wigsim
