#pragma once

#include <string>
#include <vector>

#include "risloc/channel.hpp"
#include "risloc/constants.hpp"
#include "risloc/geometry.hpp"
#include "risloc/rng.hpp"

namespace risloc {

/// Placement rules for random targets. Bearings are at the RIS; delays are
/// in PR samples.
struct SceneConstraints {
    double sector_limit_deg = 70.0;
    /// Two targets must differ by at least this much in sin(theta)...
    double min_bearing_separation_sine = 0.15;
    /// ...and by at least this many degrees, unless they are co-bearing.
    double min_bearing_separation_deg = 1.0;
    /// Pairs closer than this in bearing count as co-bearing and are allowed.
    double co_bearing_tolerance_deg = 0.1;
    /// Chance that a new target is placed on the bearing of an existing one.
    double co_bearing_probability = 0.0;
    double min_delay_separation_samples = 3.0;
    /// Minimum |sin(theta) - sin(theta_AP)|, keeping targets out of the AP null.
    double ap_guard_sine = 0.15;
    double max_bistatic_angle_deg = 90.0;
    /// Excess delay over the relay must lie in [guard, L - guard] samples.
    double delay_window_guard_samples = 5.0;
    int max_rejections = 10000;

    void validate() const;
};

struct SceneContext {
    NodeLayout layout;
    double f_samp = 1.0;
    int zc_length = 1;

    static SceneContext from(const Scenario& scenario);
};

/// Empty when `p` is admissible on its own, otherwise the reason it is not.
std::string admissibility_issue(const Vec2& p, const SceneContext& ctx, const SceneConstraints& c);

/// Empty when the two (individually admissible) targets may coexist.
std::string separation_issue(const Vec2& p, const Vec2& q, const SceneContext& ctx,
                             const SceneConstraints& c);

/// K targets drawn uniformly over the cell and rejected until every one is
/// admissible and every pair is separated. Throws GenerationError after
/// max_rejections rejected draws.
std::vector<Vec2> random_scene(Rng& rng, int k, const SceneContext& ctx, const SceneConstraints& c);

}  // namespace risloc
