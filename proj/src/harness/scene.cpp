#include "risloc/harness/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risloc/errors.hpp"

namespace risloc {

void SceneConstraints::validate() const {
    auto fail = [](const std::string& f, const std::string& m) { throw ConfigError(f, m); };
    if (!(sector_limit_deg > 0.0 && sector_limit_deg < 90.0))
        fail("sector_limit_deg", "must lie in (0, 90)");
    if (!(min_bearing_separation_sine >= 0.0)) fail("min_bearing_separation_sine", "must be >= 0");
    if (!(min_bearing_separation_deg >= 0.0)) fail("min_bearing_separation_deg", "must be >= 0");
    if (!(co_bearing_tolerance_deg >= 0.0)) fail("co_bearing_tolerance_deg", "must be >= 0");
    if (!(co_bearing_probability >= 0.0 && co_bearing_probability <= 1.0))
        fail("co_bearing_probability", "must lie in [0, 1]");
    if (!(min_delay_separation_samples >= 0.0)) fail("min_delay_separation_samples", "must be >= 0");
    if (!(ap_guard_sine >= 0.0)) fail("ap_guard_sine", "must be >= 0");
    if (!(max_bistatic_angle_deg > 0.0 && max_bistatic_angle_deg <= 180.0))
        fail("max_bistatic_angle_deg", "must lie in (0, 180]");
    if (!(delay_window_guard_samples >= 0.0)) fail("delay_window_guard_samples", "must be >= 0");
    if (max_rejections < 1) fail("max_rejections", "must be >= 1");
}

SceneContext SceneContext::from(const Scenario& sc) {
    return {sc.layout, sc.f_samp, sc.zc_length};
}

namespace {

double excess_samples(const Vec2& p, const SceneContext& ctx) {
    return excess_path(p, ctx.layout) / kSpeedOfLight * ctx.f_samp;
}

double ris_bearing(const Vec2& p, const SceneContext& ctx) {
    return local_angle_deg(ctx.layout.ris, p, ctx.layout.ris_boresight_deg);
}

// Distance between two directions in sine space, modulo 2: a half-wavelength
// array cannot tell sin(theta) from sin(theta) +/- 2.
double sine_distance(double deg_a, double deg_b) {
    return std::abs(std::remainder(std::sin(deg2rad(deg_a)) - std::sin(deg2rad(deg_b)), 2.0));
}

}  // namespace

std::string admissibility_issue(const Vec2& p, const SceneContext& ctx, const SceneConstraints& c) {
    if (!ctx.layout.contains(p)) return "outside the cell";
    try {
        (void)forward_sensing(p, ctx.layout);
    } catch (const DegenerateGeometryError& e) {
        return e.what();
    }
    const double theta = ris_bearing(p, ctx);
    if (std::abs(theta) > c.sector_limit_deg) return "outside the RIS sector";
    const double theta_ap = local_angle_deg(ctx.layout.ris, ctx.layout.ap, ctx.layout.ris_boresight_deg);
    if (sine_distance(theta, theta_ap) < c.ap_guard_sine)
        return "too close to the AP bearing";
    if (bistatic_angle_deg(p, ctx.layout) > c.max_bistatic_angle_deg) return "bistatic angle too wide";
    const double e = excess_samples(p, ctx);
    if (e < c.delay_window_guard_samples ||
        e > static_cast<double>(ctx.zc_length) - c.delay_window_guard_samples)
        return "excess delay outside the unambiguous window";
    return {};
}

std::string separation_issue(const Vec2& p, const Vec2& q, const SceneContext& ctx,
                             const SceneConstraints& c) {
    const double tp = ris_bearing(p, ctx), tq = ris_bearing(q, ctx);
    const double dtheta = std::abs(tp - tq);
    if (dtheta > c.co_bearing_tolerance_deg) {
        if (dtheta < c.min_bearing_separation_deg) return "bearings too close";
        if (sine_distance(tp, tq) < c.min_bearing_separation_sine)
            return "bearings too close";
    }
    const double len = static_cast<double>(ctx.zc_length);
    double dd = std::fmod(std::abs(excess_samples(p, ctx) - excess_samples(q, ctx)), len);
    dd = std::min(dd, len - dd);
    if (dd < c.min_delay_separation_samples) return "delays too close";
    return {};
}

std::vector<Vec2> random_scene(Rng& rng, int k, const SceneContext& ctx, const SceneConstraints& c) {
    if (k < 0) throw InvalidParameterError("target count must be >= 0");
    std::vector<Vec2> scene;
    if (k == 0) return scene;

    const NodeLayout& l = ctx.layout;
    std::uniform_real_distribution<double> ux(0.0, l.cell_width), uy(0.0, l.cell_height);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double diag = std::hypot(l.cell_width, l.cell_height);
    // A restart clears a partial scene that has boxed itself in.
    const int restart_after = std::max(1, c.max_rejections / 20);

    int rejections = 0, streak = 0;
    while (static_cast<int>(scene.size()) < k) {
        Vec2 cand;
        if (!scene.empty() && unit(rng) < c.co_bearing_probability) {
            std::uniform_int_distribution<std::size_t> pick(0, scene.size() - 1);
            const Vec2& ref = scene[pick(rng)];
            const Vec2 dir = (ref - l.ris).normalized();
            cand = l.ris + dir * (unit(rng) * diag);
        } else {
            cand = {ux(rng), uy(rng)};
        }
        bool ok = admissibility_issue(cand, ctx, c).empty();
        for (std::size_t i = 0; ok && i < scene.size(); ++i)
            ok = separation_issue(cand, scene[i], ctx, c).empty();
        if (ok) {
            scene.push_back(cand);
            streak = 0;
            continue;
        }
        if (++rejections >= c.max_rejections) {
            std::ostringstream os;
            os << "could not place " << k << " targets within " << c.max_rejections << " rejections";
            throw GenerationError(os.str());
        }
        if (++streak >= restart_after) {
            scene.clear();
            streak = 0;
        }
    }
    return scene;
}

}  // namespace risloc
