#pragma once

#include <cstdint>
#include <vector>

#include "risloc/constants.hpp"
#include "risloc/geometry.hpp"
#include "risloc/rng.hpp"
#include "risloc/signal.hpp"

namespace risloc {

enum class DelayMode {
    Integer,     // cyclic shift by a whole number of samples
    Fractional,  // band-limited cyclic delay via a frequency-domain phase ramp
};

enum class GainPolicy {
    UnitRandomPhase,  // |gain| = 1, uniform phase; attenuation folded into the SNR
    FreeSpace,        // Friis / bistatic radar-equation amplitudes with random phase
};

struct ChannelOptions {
    DelayMode delay_mode = DelayMode::Integer;
    bool awgn = true;
    /// Independent AWGN on every RIS element, per epoch. Off by default.
    bool ris_noise = false;
    double ris_snr_db = 50.0;
    GainPolicy gain_policy = GainPolicy::UnitRandomPhase;
    double carrier_hz = 3.5e9;  // only used by GainPolicy::FreeSpace
};

struct Scenario {
    NodeLayout layout;
    std::vector<Vec2> targets;
    int ris_elements = 64;  // M
    int pr_antennas = 16;   // N_PR
    int epochs_aoa = 64;    // N_epoch of phase q = 0
    int epochs_toa = 16;    // N_epoch of each phase q > 0
    int zc_length = 1989;
    int zc_root = 7;
    /// B_AP: true when the AP -> PR line of sight is clear.
    bool ap_los = false;
    /// B_k per target; empty means every target -> PR path is blocked.
    std::vector<bool> target_los;
    double snr_db = 0.0;
    double f_samp = kSpeedOfLight / 0.5;  // one sample ~ 0.5 m of path
    std::uint64_t seed = 0;
    ChannelOptions channel;

    int num_targets() const noexcept { return static_cast<int>(targets.size()); }
    bool target_visible(int k) const;
    /// Throws InvalidParameterError (or DegenerateGeometryError for targets).
    void validate() const;
};

/// Angles (degrees, each in its array's frame) and delays (seconds) of every path.
struct ScenarioGeometry {
    double theta_ap_ris = 0.0;  // AoA of the AP path at the RIS
    double phi_ris_pr = 0.0;    // AoD from the RIS towards the PR
    double theta_ris_pr = 0.0;  // AoA of the RIS path at the PR
    double theta_ap_pr = 0.0;   // AoA of the direct AP path at the PR
    double tau_ap_ris = 0.0;
    double tau_ris_pr = 0.0;
    double tau_ap_pr = 0.0;
    std::vector<double> theta_k_ris;  // per target
    std::vector<double> tau_k_ris;    // tau_AP^k + tau_k^RIS
    std::vector<double> theta_k_pr;
    std::vector<double> tau_k_pr;     // tau_AP^k + tau_k^PR
};

ScenarioGeometry compute_geometry(const Scenario& scenario);

struct PathGains {
    cd alpha0{1.0, 0.0};      // AP -> RIS
    std::vector<cd> alpha;    // AP -> target k -> RIS
    cd rho_ris_pr{1.0, 0.0};  // RIS -> PR
    cd rho_ap_pr{1.0, 0.0};   // AP -> PR
    std::vector<cd> rho;      // AP -> target k -> PR
};

PathGains draw_gains(const Scenario& scenario, const ScenarioGeometry& geometry, Rng& rng);

/// ULA steering vector, element i = exp(j pi i sin(theta)). Throws
/// InvalidParameterError unless theta is in (-90, 90) and num_elements >= 1.
CVec steering_vector(int num_elements, double theta_deg);
/// Same manifold parameterized directly by u = sin(theta); any real u is accepted.
CVec steering_from_sine(int num_elements, double u);

/// s(t - tau) on the cyclic sample grid. Throws InvalidParameterError for tau < 0.
CVec delay_signal(const CVec& s, double tau_s, double f_samp, DelayMode mode = DelayMode::Integer);
/// Delay by a (possibly fractional) number of samples.
CVec delay_samples(const CVec& s, double samples, DelayMode mode);

/// Impinging signal at the RIS, M x L. RIS-stage noise is added when enabled.
CMatRM synthesize_ris_signal(const Scenario& scenario, const ZcSequence& zc, const PathGains& gains,
                             Rng& rng);
CMatRM synthesize_ris_signal(const Scenario& scenario, const ScenarioGeometry& geometry,
                             const ZcSequence& zc, const PathGains& gains, Rng& rng);

/// x = a_M(phi)^T diag(v) r for every sample. Throws InvalidParameterError if
/// any |v_i| differs from 1.
CVec apply_ris_reflection(const CMatRM& r, const CVec& v, double phi_ris_pr_deg);
/// Row n is apply_ris_reflection(r, V.col(n), phi): one reflected epoch per column of V.
CMatRM reflect_epochs(const CMatRM& r, const CMat& v, double phi_ris_pr_deg);

enum class SnapshotRole { PrRaw, Beamformed };

struct SnapshotMatrix {
    CMatRM data;
    SnapshotRole role = SnapshotRole::PrRaw;
};

/// One epoch at the PR, N_PR x L.
SnapshotMatrix synthesize_pr_signal(const Scenario& scenario, const CVec& x, const ZcSequence& zc,
                                    const PathGains& gains, Rng& rng);
SnapshotMatrix synthesize_pr_signal(const Scenario& scenario, const ScenarioGeometry& geometry,
                                    const CVec& x, const ZcSequence& zc, const PathGains& gains,
                                    Rng& rng);

/// Per-sample complex noise variance at the PR for the scenario's SNR.
double noise_variance(double snr_db);

}  // namespace risloc
