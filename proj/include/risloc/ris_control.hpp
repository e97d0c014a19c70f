#pragma once

#include "risloc/constants.hpp"
#include "risloc/rng.hpp"

namespace risloc {

/// Reflection coefficients for one phase, M x N_epoch; column n drives epoch n.
struct ReflectionMatrix {
    CMat v;
    int phase = 0;

    int elements() const noexcept { return static_cast<int>(v.rows()); }
    int epochs() const noexcept { return static_cast<int>(v.cols()); }
};

/// Receive beamformer steered at the RIS: a(theta) / ||a(theta)||^2, so w^H a(theta) = 1.
CVec pr_beamformer(double theta_ris_pr_deg, int num_antennas);

/// h(theta) = diag(a(phi_RIS^PR)) a(theta): the signal seen at the PR from a
/// unit plane wave arriving at angle theta, before the reflection is applied.
/// The reflection gain is v^T h(theta).
CVec cascade_response(int num_elements, double phi_ris_pr_deg, double theta_deg);
CVec cascade_response_sine(int num_elements, double phi_ris_pr_deg, double u);

/// conj(h(theta_AP)): the phase profile that focuses the AP onto the PR.
CVec ap_null_direction(int num_elements, double theta_ap_ris_deg, double phi_ris_pr_deg);

/// I - a a^H / ||a||^2. Throws InvalidParameterError for a zero vector.
CMat null_projector(const CVec& a);

/// Phase q = 0: random phases projected away from the AP direction and
/// re-normalized to unit modulus. Each refinement iteration repeats the
/// projection on the current matrix, deepening the AP null.
/// Throws InvalidParameterError for fewer than two elements or no epochs.
ReflectionMatrix initial_reflection_matrix(double theta_ap_ris_deg, double phi_ris_pr_deg,
                                           int num_elements, int num_epochs, Rng& rng,
                                           int refinement_iterations = 0);

/// Phase q >= 1: every column is conj(h(theta_hat)), the maximum-gain
/// configuration towards the estimated direction.
ReflectionMatrix directed_reflection_matrix(double theta_hat_deg, double phi_ris_pr_deg,
                                            int num_elements, int num_epochs, int phase = 1);

}  // namespace risloc
