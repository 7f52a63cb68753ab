#include "wigsim/fft.hpp"

#include <mutex>
#include <vector>

namespace wigsim {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* fc(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

FftEngine::FftEngine(std::size_t nx, std::size_t np) : nx_(nx), np_(np) {
    std::vector<std::complex<double>> scratch(nx * np);
    const int inx = static_cast<int>(nx);
    const int inp = static_cast<int>(np);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(plan_mutex());
    // x-lines: length nx, np of them, stride np, consecutive dist 1
    fwd_x_ = fftw_plan_many_dft(1, &inx, inp, fc(scratch.data()), nullptr, inp, 1,
                                fc(scratch.data()), nullptr, inp, 1,
                                FFTW_FORWARD, flags);
    bwd_x_ = fftw_plan_many_dft(1, &inx, inp, fc(scratch.data()), nullptr, inp, 1,
                                fc(scratch.data()), nullptr, inp, 1,
                                FFTW_BACKWARD, flags);
    // p-lines: length np, nx of them, contiguous
    fwd_p_ = fftw_plan_many_dft(1, &inp, inx, fc(scratch.data()), nullptr, 1, inp,
                                fc(scratch.data()), nullptr, 1, inp,
                                FFTW_FORWARD, flags);
    bwd_p_ = fftw_plan_many_dft(1, &inp, inx, fc(scratch.data()), nullptr, 1, inp,
                                fc(scratch.data()), nullptr, 1, inp,
                                FFTW_BACKWARD, flags);
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_x_);
    fftw_destroy_plan(bwd_x_);
    fftw_destroy_plan(fwd_p_);
    fftw_destroy_plan(bwd_p_);
}

void FftEngine::forward_x(std::complex<double>* d) const { fftw_execute_dft(fwd_x_, fc(d), fc(d)); }
void FftEngine::backward_x(std::complex<double>* d) const { fftw_execute_dft(bwd_x_, fc(d), fc(d)); }
void FftEngine::forward_p(std::complex<double>* d) const { fftw_execute_dft(fwd_p_, fc(d), fc(d)); }
void FftEngine::backward_p(std::complex<double>* d) const { fftw_execute_dft(bwd_p_, fc(d), fc(d)); }

Fft1d::Fft1d(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> scratch(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), fc(scratch.data()),
                            fc(scratch.data()), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), fc(scratch.data()),
                            fc(scratch.data()), FFTW_BACKWARD, flags);
}

Fft1d::~Fft1d() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
}

void Fft1d::forward(std::complex<double>* d) const { fftw_execute_dft(fwd_, fc(d), fc(d)); }
void Fft1d::backward(std::complex<double>* d) const { fftw_execute_dft(bwd_, fc(d), fc(d)); }

}  // namespace wigsim
