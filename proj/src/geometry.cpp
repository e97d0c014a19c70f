#include "risloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risloc/errors.hpp"

namespace risloc {

namespace {

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

Vec2 rotate(const Vec2& v, double deg) {
    const double c = std::cos(deg2rad(deg));
    const double s = std::sin(deg2rad(deg));
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

void NodeLayout::validate() const {
    if (!finite(ap) || !finite(ris) || !finite(pr) || !std::isfinite(cell_width) ||
        !std::isfinite(cell_height) || !std::isfinite(ris_boresight_deg) ||
        !std::isfinite(pr_boresight_deg)) {
        throw InvalidParameterError("layout contains non-finite values");
    }
    if (cell_width <= 0.0 || cell_height <= 0.0) {
        throw InvalidParameterError("cell dimensions must be positive");
    }
    if (distance(ap, ris) <= 0.0) {
        throw InvalidParameterError("AP and RIS must not coincide");
    }
    for (const auto* p : {&ap, &ris, &pr}) {
        if (!contains(*p)) throw InvalidParameterError("node outside the cell");
    }
}

bool NodeLayout::contains(const Vec2& p) const {
    return p.x() >= 0.0 && p.x() <= cell_width && p.y() >= 0.0 && p.y() <= cell_height;
}

double distance(const Vec2& p, const Vec2& q) { return (p - q).norm(); }

double bearing_deg(const Vec2& from, const Vec2& to) {
    const Vec2 d = to - from;
    return rad2deg(std::atan2(d.y(), d.x()));
}

double wrap_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    if (w > 180.0) w -= 360.0;
    return w;
}

double local_angle_deg(const Vec2& from, const Vec2& to, double boresight_deg) {
    return wrap_deg(bearing_deg(from, to) - boresight_deg);
}

double relay_delay(const NodeLayout& layout) {
    return (distance(layout.ap, layout.ris) + distance(layout.ris, layout.pr)) / kSpeedOfLight;
}

double excess_path(const Vec2& target, const NodeLayout& layout) {
    return distance(layout.ap, target) + distance(target, layout.ris) -
           distance(layout.ap, layout.ris);
}

double bistatic_angle_deg(const Vec2& target, const NodeLayout& layout) {
    const Vec2 to_ap = layout.ap - target;
    const Vec2 to_ris = layout.ris - target;
    const double c = to_ap.dot(to_ris) / (to_ap.norm() * to_ris.norm());
    return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

SensingPair forward_sensing(const Vec2& target, const NodeLayout& layout) {
    const double d_ap_ris = distance(layout.ap, layout.ris);
    const double d_k_ris = distance(target, layout.ris);
    const double d_ap_k = distance(layout.ap, target);
    if (d_k_ris <= 1e-12 * d_ap_ris) {
        throw DegenerateGeometryError("target coincides with the RIS");
    }
    if (d_ap_k + d_k_ris - d_ap_ris <= 1e-12 * d_ap_ris) {
        throw DegenerateGeometryError("target lies on the AP-RIS segment");
    }
    const double theta = local_angle_deg(layout.ris, target, layout.ris_boresight_deg);
    if (!(std::abs(theta) < 90.0)) {
        std::ostringstream msg;
        msg << "target bearing " << theta << " deg is outside the RIS front half-plane";
        throw DegenerateGeometryError(msg.str());
    }
    return {theta, (d_ap_k + d_k_ris + distance(layout.ris, layout.pr)) / kSpeedOfLight};
}

EllipseParams ellipse_from_delay(double tau_s, const NodeLayout& layout) {
    const double d_ap_ris = distance(layout.ap, layout.ris);
    const double focal_sum = kSpeedOfLight * tau_s - distance(layout.ris, layout.pr);
    if (!(focal_sum > d_ap_ris)) {
        std::ostringstream msg;
        msg << "delay " << tau_s << " s gives focal sum " << focal_sum
            << " m, not above the focal distance " << d_ap_ris << " m";
        throw InfeasibleDelayError(msg.str());
    }
    EllipseParams e;
    e.a = 0.5 * focal_sum;
    const double half_focal = 0.5 * d_ap_ris;
    e.b = std::sqrt((e.a - half_focal) * (e.a + half_focal));
    e.center = 0.5 * (layout.ap + layout.ris);
    e.tilt_deg = bearing_deg(layout.ap, layout.ris);
    return e;
}

Vec2 map_to_position(const SensingPair& pair, const NodeLayout& layout) {
    if (!(std::abs(pair.theta_ris_deg) < 90.0)) {
        throw InvalidParameterError("theta_ris must lie in (-90, 90) degrees");
    }
    const EllipseParams e = ellipse_from_delay(pair.tau_s, layout);

    // Work in the frame where the ellipse is centred at the origin with its
    // focal axis on x; the ray leaves the RIS (a focus) along the bearing.
    const Vec2 dir_world = rotate(Vec2{1.0, 0.0}, layout.ris_boresight_deg + pair.theta_ris_deg);
    const Vec2 dir = rotate(dir_world, -e.tilt_deg);
    const Vec2 origin = rotate(layout.ris - e.center, -e.tilt_deg);

    const double ia2 = 1.0 / (e.a * e.a);
    const double ib2 = 1.0 / (e.b * e.b);
    const double qa = dir.x() * dir.x() * ia2 + dir.y() * dir.y() * ib2;
    const double qb = origin.x() * dir.x() * ia2 + origin.y() * dir.y() * ib2;
    const double qc = origin.x() * origin.x() * ia2 + origin.y() * origin.y() * ib2 - 1.0;
    const double disc = qb * qb - qa * qc;
    if (!(disc >= 0.0)) throw NoSolutionError("bearing ray misses the delay ellipse");

    // qa t^2 + 2 qb t + qc = 0; the focus is interior (qc < 0), so the roots
    // have opposite signs and the positive one lies along the ray.
    const double s = std::sqrt(disc);
    const double t = qb <= 0.0 ? (s - qb) / qa : -qc / (qb + s);
    if (!(t > 0.0)) throw NoSolutionError("no intersection in the admissible half-plane");

    const Vec2 local = origin + t * dir;
    const Vec2 p = e.center + rotate(local, e.tilt_deg);
    const Vec2 boresight = rotate(Vec2{1.0, 0.0}, layout.ris_boresight_deg);
    if (!((p - layout.ris).dot(boresight) > 0.0)) {
        throw NoSolutionError("intersection lies behind the RIS");
    }
    return p;
}

}  // namespace risloc
