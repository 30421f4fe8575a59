#pragma once

// Fixed-step oracle integrator. Marches the same contact-kinematics rules as
// the library in small arc-length increments (default 1e-4 m), re-deciding the
// pivot and rates every step, instead of the library's closed-form event legs.
// All geometric queries are implemented locally so the two integrators share
// only the model rules, not code paths.

#include <optional>
#include <string>
#include <vector>

#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"

namespace refsim {

struct RefPivot {
    vinenav::Vec2 position;
    vinenav::PivotKind kind = vinenav::PivotKind::contact;
    vinenav::Handedness handedness = vinenav::Handedness::both;
    int obstacle = -1;
    bool touching = false;
};

struct RefResult {
    vinenav::Vec2 tip;
    vinenav::Vec2 heading;
    double length = 0.0;
    std::string termination;  // same names the library's to_string produces
    std::vector<vinenav::Vec2> tip_path;
    std::vector<RefPivot> pivots;
    int contact_episodes = 0;   // tip-contact episodes entered
    double min_approach = 1e9;  // smallest |heading . tangent| over contact entries
};

RefResult ref_deploy(const vinenav::MapModel& map, const vinenav::RobotDesign& design,
                     std::optional<double> start_angle = std::nullopt, double dl = 1e-4,
                     vinenav::PivotPolicy policy = vinenav::PivotPolicy::most_proximal_unsupported);

}  // namespace refsim
