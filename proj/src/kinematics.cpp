#include "vinenav/kinematics.hpp"

#include <cmath>

namespace vinenav {

std::vector<Vec2> RobotState::backbone() const {
    std::vector<Vec2> pts;
    pts.reserve(pivots.size() + 1);
    for (const auto& p : pivots) pts.push_back(p.position);
    pts.push_back(tip);
    return pts;
}

double RobotState::length() const {
    double s = 0.0;
    Vec2 prev = pivots.front().position;
    for (std::size_t i = 1; i < pivots.size(); ++i) {
        s += dist(prev, pivots[i].position);
        prev = pivots[i].position;
    }
    return s + dist(prev, tip);
}

double RobotState::joint_angle(std::size_t i) const {
    if (i == 0 || i >= pivots.size()) return 0.0;
    Vec2 in = pivots[i].position - pivots[i - 1].position;
    Vec2 out = (i + 1 < pivots.size() ? pivots[i + 1].position : tip) - pivots[i].position;
    if (out.norm() < kEpsGeom) out = heading;  // tip still at this pivot
    if (in.norm() < kEpsGeom) return 0.0;
    return signed_angle(in, out);
}

std::vector<Vec2> to_cartesian(const JointState& js, Vec2 base) {
    std::vector<Vec2> pts{base};
    pts.reserve(js.lengths.size() + 1);
    double heading = 0.0;
    for (std::size_t i = 0; i < js.lengths.size(); ++i) {
        if (js.lengths[i] <= 0.0) throw std::invalid_argument("nonpositive segment length");
        heading = (i == 0) ? js.angles[0] : heading + js.angles[i];
        pts.push_back(pts.back() + Vec2::from_angle(heading) * js.lengths[i]);
    }
    return pts;
}

JointState to_joint(const std::vector<Vec2>& points) {
    if (points.size() < 2) throw std::invalid_argument("backbone needs at least two points");
    JointState js;
    Vec2 prev_dir;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        Vec2 seg = points[i + 1] - points[i];
        double len = seg.norm();
        if (len < kEpsGeom) throw std::invalid_argument("backbone has coincident consecutive points");
        Vec2 dir = seg / len;
        js.angles.push_back(i == 0 ? dir.angle() : signed_angle(prev_dir, dir));
        js.lengths.push_back(len);
        prev_dir = dir;
    }
    return js;
}

void RobotDesign::validate() const {
    if (segments.empty()) throw std::invalid_argument("design needs at least one segment");
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (!(segments[i].length > 0.0))
            throw std::invalid_argument("segments[" + std::to_string(i) + "]: length must be positive");
}

RotationSense turn_direction(Vec2 heading, Vec2 tangent) {
    double along = heading.dot(tangent);
    if (std::abs(along) < 1e-12)
        throw std::domain_error("head-on contact: rotation sense undefined");
    Vec2 t = along > 0 ? tangent : -tangent;
    double z = heading.cross(t);
    // z == 0 means the heading already lies along the edge (grazing); the
    // slide then translates without rotating and the sense is immaterial.
    return z >= 0 ? RotationSense::left : RotationSense::right;
}

SlideRates contact_slide_rate(Vec2 pivot, Vec2 tip, Vec2 heading, Vec2 tangent, double u) {
    Vec2 zw = (tip - pivot).perp();  // zhat x (tip - pivot)
    double det = -zw.cross(tangent);
    if (std::abs(det) < 1e-12)
        throw std::domain_error("singular contact geometry: tip motion cannot follow the edge");
    SlideRates r;
    r.theta_dot = -u * heading.cross(tangent) / zw.cross(tangent);
    r.v = u * heading.dot(tangent) + r.theta_dot * zw.dot(tangent);
    return r;
}

namespace {

bool pivot_unsupported(const RobotState& state, std::size_t i, RotationSense sense,
                       const MapModel& map, const ModelConfig& cfg) {
    double ang = sense_sign(sense) * cfg.probe_rot;
    Vec2 center = state.pivots[i].position;
    for (std::size_t j = i + 1; j < state.pivots.size(); ++j) {
        const PivotPoint& pj = state.pivots[j];
        if (pj.kind != PivotKind::contact || !pj.touching) continue;
        Vec2 moved = center + (pj.position - center).rotated(ang);
        if (map.obstacles[pj.obstacle].signed_distance(moved) < -cfg.eps_geom) return false;
    }
    return true;
}

}  // namespace

std::size_t select_pivot(const RobotState& state, RotationSense sense, const MapModel& map,
                         PivotPolicy policy, const ModelConfig& cfg) {
    std::vector<std::size_t> usable;  // admits the sense, not under the tip, unsupported
    for (std::size_t i = 0; i < state.pivots.size(); ++i) {
        const PivotPoint& p = state.pivots[i];
        if (!p.admits(sense)) continue;
        if (dist(p.position, state.tip) < cfg.eps_geom) continue;  // pivot under the tip cannot steer it
        if (!pivot_unsupported(state, i, sense, map, cfg)) continue;
        usable.push_back(i);
    }
    if (policy == PivotPolicy::most_distal_unsupported) {
        if (!usable.empty()) return usable.back();
        return 0;  // base is the universal fallback
    }
    for (std::size_t i : usable)
        if (i != 0) return i;  // most proximal, skipping the base
    return 0;
}

std::size_t select_pivot(const RobotState& state, RotationSense sense, const MapModel& map,
                         PivotPolicy policy) {
    return select_pivot(state, sense, map, policy, ModelConfig{});
}

}  // namespace vinenav
