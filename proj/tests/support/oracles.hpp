#pragma once

// Independently written, deliberately slow checks used only by tests:
// empirical-CDF distance, brute-force geometry queries, an alternative
// minimum-turn route solver, and dense quadrature of reach probability.

#include <cstddef>
#include <optional>
#include <vector>

#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"
#include "vinenav/planner.hpp"

namespace oracles {

// Kolmogorov-Smirnov statistic of the sample against U(0,1).
double ks_uniform(std::vector<double> xs);

// Earliest ray/obstacle-boundary intersection by per-edge linear solve,
// keeping endpoint touches and collinear overlaps. Returns the ray parameter
// (distance for a unit direction), or nullopt when nothing is crossed.
std::optional<double> ray_hit_brute(vinenav::Vec2 origin, vinenav::Vec2 dir,
                                    const vinenav::MapModel& map, double min_t = 1e-9);

// Distance from p to the nearest of `samples_per_edge` points spread over
// every edge of the polygon. Approximate: accurate to about the sample pitch.
double boundary_dist_sampled(vinenav::Vec2 p, const vinenav::Polygon& poly,
                             std::size_t samples_per_edge = 20000);

// Minimal designed-turn count start -> goal by Bellman-Ford sweeps over the
// same nodes and edge rules the waypoint-graph router uses.
std::optional<std::size_t> bf_min_turns(const vinenav::WaypointGraph& g);

// Midpoint-rule quadrature of reach probability over independent uniform
// turn noise on every nonzero designed turn. Supports one or two noisy
// turns; the map must have a fixed start angle so no aim exemption applies.
double success_quadrature(const vinenav::MapModel& map, const vinenav::RobotDesign& design,
                          double sigma_turn, std::size_t grid);

}  // namespace oracles
