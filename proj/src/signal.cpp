#include "risloc/signal.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "risloc/errors.hpp"
#include "risloc/fft.hpp"

namespace risloc {

ZcSequence generate_zc(int length, int root) {
    if (length <= 0 || length % 2 == 0) {
        throw InvalidParameterError("ZC length must be a positive odd integer, got " +
                                    std::to_string(length));
    }
    if (root < 1 || root >= length) {
        throw InvalidParameterError("ZC root must lie in [1, length-1], got " + std::to_string(root));
    }
    if (std::gcd(root, length) != 1) {
        throw InvalidParameterError("ZC root " + std::to_string(root) +
                                    " is not relatively prime with length " +
                                    std::to_string(length));
    }

    ZcSequence seq{length, root, CVec(length)};
    // r m (m+1) is reduced modulo 2N exactly before it becomes a phase.
    const std::int64_t n = length;
    const std::int64_t modulus = 2 * n;
    for (std::int64_t m = 0; m < n; ++m) {
        const std::int64_t k = (static_cast<std::int64_t>(root) * ((m * (m + 1)) % modulus)) % modulus;
        seq.samples[m] = std::polar(1.0, -kPi * static_cast<double>(k) / static_cast<double>(n));
    }
    return seq;
}

double cyclic_autocorrelation(const ZcSequence& seq, int shift) {
    if (shift < 0 || shift >= seq.length) {
        throw InvalidParameterError("shift must lie in [0, N_zc), got " + std::to_string(shift));
    }
    const int n = seq.length;
    cd acc{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
        acc += seq.samples[m] * std::conj(seq.samples[((m - shift) % n + n) % n]);
    }
    return std::abs(acc);
}

std::size_t CorrelationProfile::argmax() const {
    return static_cast<std::size_t>(
        std::distance(magnitudes.begin(), std::max_element(magnitudes.begin(), magnitudes.end())));
}

std::vector<double> CorrelationProfile::normalized() const {
    std::vector<double> out(magnitudes.size(), 0.0);
    if (peak > 0.0) {
        std::transform(magnitudes.begin(), magnitudes.end(), out.begin(),
                       [p = peak](double v) { return v / p; });
    }
    return out;
}

Correlator::Correlator(const ZcSequence& reference)
    : length_(reference.size()), ref_spectrum_conj_(reference.size()) {
    FftPlan::get(length_).forward(reference.samples.data(), ref_spectrum_conj_.data());
    ref_spectrum_conj_ = ref_spectrum_conj_.conjugate();
}

CVec Correlator::correlate(std::span<const cd> test) const {
    CVec out(length_);
    CVec scratch(length_);
    correlate_into(test, {out.data(), length_}, {scratch.data(), length_});
    return out;
}

void Correlator::correlate_into(std::span<const cd> test, std::span<cd> out,
                                std::span<cd> scratch) const {
    if (test.size() != length_ || out.size() != length_ || scratch.size() != length_) {
        throw InvalidParameterError("correlation length mismatch: expected " +
                                    std::to_string(length_) + ", got " +
                                    std::to_string(test.size()));
    }
    const auto& plan = FftPlan::get(length_);
    plan.forward(test.data(), scratch.data());
    const double scale = 1.0 / static_cast<double>(length_);
    for (std::size_t k = 0; k < length_; ++k) scratch[k] *= ref_spectrum_conj_[k] * scale;
    plan.inverse(scratch.data(), out.data());
}

CorrelationProfile cross_correlate(const ZcSequence& reference, std::span<const cd> test) {
    if (test.size() != reference.size()) {
        throw InvalidParameterError("test length " + std::to_string(test.size()) +
                                    " does not match N_zc " + std::to_string(reference.size()));
    }
    const CVec c = Correlator(reference).correlate(test);
    CorrelationProfile profile;
    profile.magnitudes.resize(test.size());
    for (std::size_t d = 0; d < test.size(); ++d) profile.magnitudes[d] = std::abs(c[d]);
    profile.peak = *std::max_element(profile.magnitudes.begin(), profile.magnitudes.end());
    return profile;
}

CVec center_series(std::span<const cd> z) {
    if (z.empty()) throw InvalidParameterError("cannot center an empty series");
    cd mean{0.0, 0.0};
    for (const cd& v : z) mean += v;
    mean /= static_cast<double>(z.size());
    CVec out(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) out[n] = z[n] - mean;
    return out;
}

}  // namespace risloc
