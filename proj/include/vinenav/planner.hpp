#pragma once

// Design synthesis: a coarse minimum-turn route over a waypoint/heading
// graph whose zero-cost edges are certified by straight-growth simulations,
// followed by greedy per-waypoint turn placement under manufacturing noise.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"
#include "vinenav/uncertainty.hpp"

namespace vinenav {

struct Waypoint {
    enum class Source { start, goal, obstacle_vertex, interior };
    Vec2 position;
    Source source = Source::interior;
    int obstacle = -1;  // obstacle_vertex: owning obstacle
    int vertex = -1;    // obstacle_vertex: vertex index
};

struct WaypointSet {
    std::vector<Waypoint> points;
    std::size_t start_index = 0;
    std::size_t goal_index = 0;
};

// Start, goal, every obstacle vertex pushed `vertex_offset` outward along its
// corner bisector (dropped when that lands inside an obstacle or outside the
// bounds), plus `interior_count` rejection-sampled free-space points.
WaypointSet build_waypoints(const MapModel& map, std::size_t interior_count, std::uint64_t seed,
                            double vertex_offset = 0.01);

// Certificate that straight growth launched from waypoint `from_wp` with the
// bin-center heading of `from_bin` first passes within the success radius of
// `to_wp`, arriving with a heading in `to_bin` after `arrive_length` meters.
struct FlowEdge {
    std::size_t from_wp = 0;
    std::size_t from_bin = 0;
    std::size_t to_wp = 0;
    std::size_t to_bin = 0;
    double arrive_length = 0.0;
    Vec2 arrive_pos;
    double arrive_angle = 0.0;
};

struct GraphParams {
    std::size_t bins = 360;
    double theta_max = M_PI / 2;  // largest manufacturable turn magnitude
    double probe_factor = 4.0;    // probe length as a multiple of the bounds diagonal
};

struct WaypointGraph {
    std::size_t n_waypoints = 0;
    std::size_t bins = 360;
    double theta_max = M_PI / 2;
    std::size_t start_wp = 0;
    std::size_t goal_wp = 0;
    std::vector<std::size_t> start_bins;  // launch bins reachable at zero cost
    std::vector<FlowEdge> flow;
    std::vector<std::vector<std::size_t>> flow_out;  // node -> indices into flow

    std::size_t node(std::size_t wp, std::size_t bin) const { return wp * bins + bin; }
    double bin_width() const { return 2.0 * M_PI / bins; }
    double bin_angle(std::size_t bin) const { return -M_PI + (bin + 0.5) * bin_width(); }
    std::size_t angle_bin(double ang) const;
};

WaypointGraph build_graph(const WaypointSet& wps, const MapModel& map, const GraphParams& p,
                          const ModelConfig& cfg = {});

struct PlanPath {
    std::size_t turn_weight = 0;
    std::vector<std::pair<std::size_t, std::size_t>> nodes;  // (waypoint, bin)
    std::vector<std::size_t> waypoints;                      // condensed visit order
};

// Fewest-designed-turns route from start to goal; ties broken by hop count
// and then node index, so the result is deterministic. nullopt = unreachable.
std::optional<PlanPath> min_turn_route(const WaypointGraph& g);

class PlanError : public std::runtime_error {
  public:
    enum class Code { unreachable, infeasible_waypoint, depleted_particles };
    PlanError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

struct PlanParams {
    UncertaintyModel uncertainty;
    std::size_t particles = 400;       // prefix realizations per stage
    double turn_step = M_PI / 180.0;   // candidate turn resolution
    std::size_t interior_waypoints = 0;
    std::uint64_t seed = 1;
    std::uint64_t eval_trials = 2000;  // final Monte-Carlo evaluation
    GraphParams graph;
};

struct StageReport {
    std::size_t waypoint = 0;   // target waypoint index in the set
    double turn = 0.0;          // committed turn for this stage
    double length = 0.0;        // committed segment length
    double success = 0.0;       // estimated reach probability of the stage
    std::size_t survivors = 0;  // particles that reproduced the prefix
};

struct PlanResult {
    PlanPath route;
    std::vector<Vec2> route_positions;  // condensed route, start included
    RobotDesign design;
    double initial_heading = 0.0;  // launch heading (aim for free-start maps)
    std::vector<StageReport> stages;
    SuccessEstimate estimate;
};

// Greedy per-waypoint design synthesis along fixed route target positions.
// `targets` excludes the start position. Throws PlanError.
RobotDesign route_design(const MapModel& map, const std::vector<Vec2>& targets,
                         const PlanParams& p, const ModelConfig& cfg = {},
                         std::vector<StageReport>* reports = nullptr);

// Full pipeline: waypoints, graph, route, design, Monte-Carlo estimate.
PlanResult plan(const MapModel& map, const PlanParams& p, const ModelConfig& cfg = {});

}  // namespace vinenav
