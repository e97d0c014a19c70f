#pragma once

#include "risloc/constants.hpp"

namespace risloc {

/// Known node positions in the 2-D cell. Angles are degrees, counter-clockwise
/// from the +x axis; each array measures arrival angles from its own boresight.
struct NodeLayout {
    Vec2 ap{0.0, 0.0};
    Vec2 ris{0.0, 0.0};
    Vec2 pr{0.0, 0.0};
    double cell_width = 1000.0;
    double cell_height = 1000.0;
    double ris_boresight_deg = 0.0;
    double pr_boresight_deg = 0.0;

    /// Throws InvalidParameterError on non-finite values, coincident foci or
    /// nodes outside the cell.
    void validate() const;
    bool contains(const Vec2& p) const;
};

/// (AoA at the RIS, total delay AP -> target -> RIS -> PR).
struct SensingPair {
    double theta_ris_deg = 0.0;
    double tau_s = 0.0;
};

/// Ellipse with foci at the AP and the RIS.
struct EllipseParams {
    double a = 0.0;  // semi-major, m
    double b = 0.0;  // semi-minor, m
    Vec2 center{0.0, 0.0};
    double tilt_deg = 0.0;  // bearing of the RIS seen from the AP
};

double distance(const Vec2& p, const Vec2& q);

/// Bearing of `to` seen from `from`, degrees in (-180, 180].
double bearing_deg(const Vec2& from, const Vec2& to);

/// Wraps an angle to (-180, 180].
double wrap_deg(double deg);

/// Angle of `to` seen from `from`, relative to `boresight_deg`, in (-180, 180].
double local_angle_deg(const Vec2& from, const Vec2& to, double boresight_deg);

/// Delay of the target-free AP -> RIS -> PR relay path.
double relay_delay(const NodeLayout& layout);

/// d_AP^k + d_k^RIS - d_AP^RIS, the path length in excess of the AP-RIS baseline.
double excess_path(const Vec2& target, const NodeLayout& layout);

/// Angle AP-target-RIS at the target, degrees.
double bistatic_angle_deg(const Vec2& target, const NodeLayout& layout);

/// True (theta, tau) of a target. Throws DegenerateGeometryError for a target
/// at the RIS, on the AP-RIS segment, or outside the open front half-plane of
/// the RIS.
SensingPair forward_sensing(const Vec2& target, const NodeLayout& layout);

/// Throws InfeasibleDelayError unless c*tau > d_AP^RIS + d_RIS^PR.
EllipseParams ellipse_from_delay(double tau_s, const NodeLayout& layout);

/// Inverse of forward_sensing: intersects the RIS bearing ray with the
/// AP/RIS-focal ellipse and keeps the root on the PR-facing side of the RIS.
Vec2 map_to_position(const SensingPair& pair, const NodeLayout& layout);

}  // namespace risloc
