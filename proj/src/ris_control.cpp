#include "risloc/ris_control.hpp"

#include <cmath>

#include "risloc/channel.hpp"
#include "risloc/errors.hpp"

namespace risloc {

namespace {

CMat unit_modulus(const CMat& m) {
    return m.unaryExpr([](const cd& z) { return std::polar(1.0, std::arg(z)); });
}

}  // namespace

CVec pr_beamformer(double theta_ris_pr_deg, int num_antennas) {
    CVec a = steering_vector(num_antennas, theta_ris_pr_deg);
    return a / static_cast<double>(num_antennas);
}

CVec cascade_response(int num_elements, double phi_ris_pr_deg, double theta_deg) {
    return steering_vector(num_elements, phi_ris_pr_deg)
        .cwiseProduct(steering_vector(num_elements, theta_deg));
}

CVec cascade_response_sine(int num_elements, double phi_ris_pr_deg, double u) {
    return steering_vector(num_elements, phi_ris_pr_deg)
        .cwiseProduct(steering_from_sine(num_elements, u));
}

CVec ap_null_direction(int num_elements, double theta_ap_ris_deg, double phi_ris_pr_deg) {
    return cascade_response(num_elements, phi_ris_pr_deg, theta_ap_ris_deg).conjugate();
}

CMat null_projector(const CVec& a) {
    const double norm2 = a.squaredNorm();
    if (!(norm2 > 0.0)) throw InvalidParameterError("null projector needs a non-zero direction");
    return CMat::Identity(a.size(), a.size()) - a * a.adjoint() / norm2;
}

ReflectionMatrix initial_reflection_matrix(double theta_ap_ris_deg, double phi_ris_pr_deg,
                                           int num_elements, int num_epochs, Rng& rng,
                                           int refinement_iterations) {
    if (num_elements < 2)
        throw InvalidParameterError("AP null needs at least two RIS elements");
    if (num_epochs < 1) throw InvalidParameterError("num_epochs must be >= 1");
    if (refinement_iterations < 0)
        throw InvalidParameterError("refinement_iterations must be >= 0");

    const CMat p = null_projector(ap_null_direction(num_elements, theta_ap_ris_deg, phi_ris_pr_deg));
    CMat gamma(num_elements, num_epochs);
    fill_complex_normal(rng, 1.0, {gamma.data(), static_cast<std::size_t>(gamma.size())});

    ReflectionMatrix out;
    out.phase = 0;
    out.v = unit_modulus(p * gamma);
    for (int it = 0; it < refinement_iterations; ++it) out.v = unit_modulus(p * out.v);
    return out;
}

ReflectionMatrix directed_reflection_matrix(double theta_hat_deg, double phi_ris_pr_deg,
                                            int num_elements, int num_epochs, int phase) {
    if (num_epochs < 1) throw InvalidParameterError("num_epochs must be >= 1");
    const CVec col = cascade_response(num_elements, phi_ris_pr_deg, theta_hat_deg).conjugate();
    ReflectionMatrix out;
    out.phase = phase;
    out.v = col.replicate(1, num_epochs);
    return out;
}

}  // namespace risloc
