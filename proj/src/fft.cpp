#include "risloc/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "risloc/errors.hpp"

namespace risloc {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

const FftPlan& FftPlan::get(std::size_t length) {
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(length);
    if (it == cache.end()) {
        it = cache.emplace(length, std::unique_ptr<FftPlan>(new FftPlan(length))).first;
    }
    return *it->second;
}

FftPlan::FftPlan(std::size_t length) : length_(length) {
    if (length == 0) throw InvalidParameterError("FFT length must be positive");
    std::vector<std::complex<double>> a(length), b(length);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    // FFTW_ESTIMATE keeps the chosen algorithm (and so the rounding) identical
    // from run to run; FFTW_UNALIGNED allows execution on arbitrary buffers.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int n = static_cast<int>(length);
    forward_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
    if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
        throw Error("FFTW failed to create a plan");
    }
}

FftPlan::~FftPlan() {
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FftPlan::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace risloc
