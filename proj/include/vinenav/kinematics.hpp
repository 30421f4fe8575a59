#pragma once

// Lumped-parameter robot state and the contact kinematics primitives.
//
// The growing robot is represented by an ordered list of pivot points: the
// base, followed by bends created at obstacle contacts and at designed turns.
// The body is the polyline through the pivots, ending at the tip. Growth adds
// length at the tip only; in free space the tip extends the last segment,
// and in contact the whole distal chain rotates about a chosen pivot while
// the tip slides along the obstacle edge.

#include <cstddef>
#include <optional>
#include <vector>

#include "vinenav/geometry.hpp"

namespace vinenav {

enum class Handedness { left, right, both };

enum class PivotKind { base, contact, designed_turn };

enum class RotationSense { left, right };  // left = counter-clockwise (+z)

inline double sense_sign(RotationSense s) { return s == RotationSense::left ? 1.0 : -1.0; }

struct PivotPoint {
    Vec2 position;
    PivotKind kind = PivotKind::contact;
    Handedness handedness = Handedness::both;
    int obstacle = -1;      // contact pivots: index of the obstacle touched
    int design_index = -1;  // designed turns: index of the design pair
    bool touching = false;  // contact pivots: still resting on the obstacle boundary

    bool admits(RotationSense s) const {
        if (handedness == Handedness::both) return true;
        return (s == RotationSense::left) == (handedness == Handedness::left);
    }
};

struct RobotState {
    std::vector<PivotPoint> pivots;  // pivots[0] is the base
    Vec2 tip;
    Vec2 heading;  // unit direction of tip growth

    // Positions of every backbone node: pivots then tip.
    std::vector<Vec2> backbone() const;
    double length() const;  // total backbone arc length
    // Interior bend angle at pivot i (signed turn from incoming to outgoing
    // segment); the outgoing direction at the last pivot uses the heading
    // when the tip is coincident with it.
    double joint_angle(std::size_t i) const;
};

// Joint-space view of a pivot chain: angles[0] is the absolute heading of the
// first segment, angles[i>0] are signed relative bends, lengths are the
// segment lengths between consecutive pivot points (and the tip).
struct JointState {
    std::vector<double> angles;
    std::vector<double> lengths;
};

// Forward map: base position + joint state -> backbone points (pivots + tip).
std::vector<Vec2> to_cartesian(const JointState& js, Vec2 base = {0.0, 0.0});

// Inverse map from a backbone polyline (at least two points). Throws
// std::invalid_argument on coincident consecutive points.
JointState to_joint(const std::vector<Vec2>& points);

// One pair of the manufactured program: evert a bend of `turn` radians once
// the grown length reaches the cumulative length of all previous pairs, then
// grow `length` meters. turn == 0 everts no bend.
struct DesignSegment {
    double length = 0.0;
    double turn = 0.0;
};

struct RobotDesign {
    std::vector<DesignSegment> segments;

    double total_length() const {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.length;
        return s;
    }
    std::size_t turn_count() const {
        std::size_t n = 0;
        for (const auto& seg : segments)
            if (seg.turn != 0.0) ++n;
        return n;
    }
    // Throws std::invalid_argument on non-positive segment lengths.
    void validate() const;
};

// Direction the robot rotates while sliding along an obstacle edge: the sense
// that carries the heading toward the edge tangent. `tangent` is reoriented
// so heading.dot(tangent) > 0 first. Throws std::domain_error for head-on
// (perpendicular) contact where the sense is undefined.
RotationSense turn_direction(Vec2 heading, Vec2 tangent);

// Rates for sliding contact at growth speed u: the distal chain rotates at
// theta_dot about the pivot while the tip translates at v along the edge
// tangent. Solves u*heading + theta_dot * zhat x (tip - pivot) = v * tangent.
// Throws std::domain_error when the system is singular (tip over the pivot or
// degenerate perpendicular contact).
struct SlideRates {
    double theta_dot = 0.0;  // rad per meter of growth (u = 1)
    double v = 0.0;          // tip speed along the tangent per meter of growth
};
SlideRates contact_slide_rate(Vec2 pivot, Vec2 tip, Vec2 heading, Vec2 tangent, double u = 1.0);

enum class PivotPolicy {
    most_proximal_unsupported,  // default
    most_distal_unsupported,    // alternate selection rule
};

// Pick the pivot the distal chain rotates about for a slide with the given
// rotation sense. Candidates are pivots whose handedness admits the sense and
// that are not coincident with the tip; a candidate is "unsupported" when an
// infinitesimal rotation about it pushes no distal touching contact into its
// obstacle. The default policy takes the most proximal unsupported candidate
// other than the base (falling back to the base); the alternate policy takes
// the most distal one. The base always admits both senses, so a valid index
// is always returned.
std::size_t select_pivot(const RobotState& state, RotationSense sense, const MapModel& map,
                         PivotPolicy policy = PivotPolicy::most_proximal_unsupported);

// Shared model tolerances.
struct ModelConfig {
    PivotPolicy policy = PivotPolicy::most_proximal_unsupported;
    double eps_geom = kEpsGeom;   // coincidence / event tolerance, meters
    double eps_perp = 1e-3;       // head-on contact threshold, |heading.tangent| below this
    double eps_release = 1e-7;    // contact considered off its boundary beyond this, meters
    double probe_rot = 1e-6;      // unsupported-test probe rotation, radians
};

// select_pivot with explicit tolerances (used by the integrator).
std::size_t select_pivot(const RobotState& state, RotationSense sense, const MapModel& map,
                         PivotPolicy policy, const ModelConfig& cfg);

}  // namespace vinenav
