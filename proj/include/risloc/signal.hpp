#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "risloc/constants.hpp"

namespace risloc {

/// Zadoff-Chu preamble s_r[m] = exp(-j pi r m (m+1) / N), m = 0..N-1.
struct ZcSequence {
    int length = 0;
    int root = 0;
    CVec samples;

    std::size_t size() const noexcept { return static_cast<std::size_t>(samples.size()); }
    std::span<const cd> view() const noexcept { return {samples.data(), size()}; }
};

/// Throws InvalidParameterError unless length is odd, 1 <= root < length and
/// gcd(root, length) == 1.
ZcSequence generate_zc(int length, int root);

/// |sum_m s[m] conj(s[(m - shift) mod N])|, evaluated directly.
double cyclic_autocorrelation(const ZcSequence& seq, int shift);

/// Magnitude of a cyclic cross-correlation, one entry per lag.
struct CorrelationProfile {
    std::vector<double> magnitudes;
    double peak = 0.0;  // normalizer: max over all lags

    std::size_t argmax() const;
    /// magnitudes / peak, so the largest lag is exactly 1 (all zeros if peak is 0).
    std::vector<double> normalized() const;
};

/// Cyclic correlation against a fixed reference with a cached spectrum.
///
/// correlate() returns c[d] = sum_n test[n] conj(ref[(n - d) mod L]), so a test
/// sequence delayed by D samples peaks at lag d = D.
class Correlator {
public:
    explicit Correlator(const ZcSequence& reference);

    std::size_t length() const noexcept { return length_; }

    CVec correlate(std::span<const cd> test) const;
    /// Same as correlate() but writes into `out` (length L); `scratch` must hold L values.
    void correlate_into(std::span<const cd> test, std::span<cd> out, std::span<cd> scratch) const;

private:
    std::size_t length_;
    CVec ref_spectrum_conj_;
};

/// Full-period cyclic cross-correlation magnitudes of `test` against `reference`.
/// Throws InvalidParameterError when the lengths differ.
CorrelationProfile cross_correlate(const ZcSequence& reference, std::span<const cd> test);

/// z - mean(z). Throws InvalidParameterError on empty input.
CVec center_series(std::span<const cd> z);

}  // namespace risloc
