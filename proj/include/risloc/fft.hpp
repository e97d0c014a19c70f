#pragma once

#include <complex>
#include <cstddef>

namespace risloc {

/// Unnormalized complex DFT of a fixed length backed by FFTW.
///
/// Plans are created once per length under a lock and cached for the life of
/// the process; transform() only uses FFTW's new-array execute interface, so
/// a plan may be shared by concurrent callers.
class FftPlan {
public:
    static const FftPlan& get(std::size_t length);

    std::size_t length() const noexcept { return length_; }

    /// out[k] = sum_n in[n] exp(-2 pi j k n / N). `in` and `out` must not alias.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    /// out[n] = sum_k in[k] exp(+2 pi j k n / N), without the 1/N factor.
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

private:
    explicit FftPlan(std::size_t length);

    std::size_t length_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace risloc
