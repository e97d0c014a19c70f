#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/estimation.hpp"

namespace risloc {

struct EstimatorParams {
    AoaParams aoa;
    double g_tau = 0.3;
    int toa_min_separation_lags = 2;
    int relay_guard_samples = 2;
    /// Extra null-projection passes on the phase-0 reflection matrix.
    int null_refinement_iterations = 0;

    void validate() const;
};

/// An estimated pair that could not be turned into a position.
struct MappingFailure {
    SensingPair pair;
    std::string reason;
};

struct TrialOutcome {
    int true_count = 0;                  // K
    int estimated_count = 0;             // K_hat, the number of ToA detections
    int aoa_count = 0;                   // K_hat_theta
    int phases_executed = 0;             // 1 + K_hat_theta
    std::vector<Vec2> truth;             // true target positions
    std::vector<double> aoas_deg;        // detected directions
    std::vector<ToaEstimate> toas;       // one per detected direction
    std::vector<SensingPair> pairs;      // every (theta_hat, tau_hat) combination
    std::vector<Vec2> positions;         // mapped estimates
    std::vector<MappingFailure> failures;
    double runtime_ms = 0.0;

    int mapping_failures() const noexcept { return static_cast<int>(failures.size()); }
};

/// Runs the full two-phase acquisition and estimation chain for one scene.
/// Every random draw comes from sub-streams of `seed`, so equal inputs give
/// bit-identical outcomes.
TrialOutcome run_trial(const Scenario& scenario, const EstimatorParams& params, std::uint64_t seed);

}  // namespace risloc
