#pragma once

#include <cstddef>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/constants.hpp"
#include "risloc/ris_control.hpp"
#include "risloc/signal.hpp"

namespace risloc {

/// Lags near the relay (AP -> RIS -> PR) peak carry no target information.
/// All lags are cyclic on an L-sample period.
struct RelayGate {
    double relay_delay_s = 0.0;
    double f_samp = 1.0;
    int guard_samples = 2;

    double relay_lag() const noexcept { return relay_delay_s * f_samp; }
    /// Lag in excess of the relay lag, reduced to [0, L).
    double excess(std::size_t lag, std::size_t length) const;
    /// True unless the lag is within guard_samples of the relay lag (on either side).
    bool admits(std::size_t lag, std::size_t length) const;
    /// Total delay of a lag, unwrapped into (relay, relay + L samples).
    double delay_of(std::size_t lag, std::size_t length) const;
};

enum class AoaSolver {
    Ridge,    // regularized batch least squares across the epochs
    Matched,  // conj(V) without inversion (the ridge limit of large regularization)
    Nlms,     // normalized LMS passes over the epochs
};

struct AoaParams {
    double g_theta = 0.3;  // detection threshold on the peak-normalized spectrum
    double grid_step_deg = 0.1;
    double grid_limit_deg = 89.9;
    /// Explicit scan grid (degrees, ascending); overrides step/limit when non-empty.
    std::vector<double> scan_grid;
    double min_separation_deg = 0.5;
    AoaSolver solver = AoaSolver::Ridge;
    double regularization = 1.0;  // ridge loading, in units of N_epoch
    int nlms_passes = 4;
    double nlms_step = 0.5;
    bool refine = true;

    std::vector<double> grid() const;
    void validate() const;
};

struct AoaEstimate {
    std::vector<double> angles_deg;  // ascending
    std::vector<double> grid_deg;
    std::vector<double> spectrum;    // peak-normalized, one entry per grid angle
};

/// Detects the target directions at the RIS from the beamformed phase-0
/// epochs z0 (N_epoch x L) and the reflection matrix that produced them.
AoaEstimate estimate_aoas(const SnapshotMatrix& z0, const ReflectionMatrix& v0,
                          double phi_ris_pr_deg, const Correlator& correlator,
                          const RelayGate& gate, const AoaParams& params);

struct ToaEstimate {
    int phase = 0;
    std::vector<double> delays_s;  // ascending total delays AP -> target -> RIS -> PR
    std::vector<double> profile;   // peak-normalized correlation magnitudes
    std::size_t count() const noexcept { return delays_s.size(); }
};

/// Row mean of an epoch matrix.
CVec average_epochs(const SnapshotMatrix& z);

/// Peaks of the normalized correlation of the centered, epoch-averaged series
/// above g_tau, with the relay peak gated out.
ToaEstimate estimate_toas(const CVec& z, const Correlator& correlator, double g_tau,
                          const RelayGate& gate, int min_separation_lags = 2, int phase = 0);
ToaEstimate estimate_toas(const CVec& z, const ZcSequence& zc, double g_tau,
                          const RelayGate& gate, int min_separation_lags = 2, int phase = 0);

int count_targets(const std::vector<ToaEstimate>& estimates);

/// Indices of strict local maxima of `values` above `threshold`, merged so
/// that no two survivors are closer than `min_separation` (the larger wins).
/// With `cyclic` the ends are neighbours; otherwise the end points are never peaks.
std::vector<std::size_t> find_peaks(const std::vector<double>& values, double threshold,
                                    double min_separation, bool cyclic);

}  // namespace risloc
