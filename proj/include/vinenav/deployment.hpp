#pragma once

// Event-driven deployment of a robot design into a map.
//
// Growth is integrated exactly between discrete events (designed-turn
// eversions, obstacle contact and release, corner crossings, body sweeps,
// length exhaustion); within a contact episode the distal chain rotation has
// a closed form, so event locations are solved rather than stepped.

#include <cstddef>
#include <optional>
#include <tuple>
#include <vector>

#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"

namespace vinenav {

enum class EventType {
    free_growth,
    turn_everted,
    contact_start,
    slide,
    contact_end,
    pivot_removed,
    terminated,
};

enum class TerminationReason {
    length_reached,
    out_of_bounds,
    degenerate_contact,  // head-on (near-perpendicular) wall hit
    wedged,              // geometry admits no further sliding motion
    trapped,             // contact episode revisits the same edge and direction
};

const char* to_string(EventType t);
const char* to_string(TerminationReason r);

struct TraceEvent {
    EventType type;
    double length = 0.0;  // grown length when the event completed
    Vec2 from;            // free_growth / slide: tip path endpoints
    Vec2 to;
    int pivot = -1;       // slide: rotation pivot; turn_everted/contact_end: pivot created (-1 if none)
    int obstacle = -1;
    double angle = 0.0;   // turn_everted: everted bend; slide: rotation swept
    TerminationReason reason = TerminationReason::length_reached;
};

struct DeploymentTrace {
    std::vector<TraceEvent> events;
    std::vector<Vec2> tip_path;            // polyline of tip positions
    std::vector<double> tip_path_length;   // grown length at each tip_path point
    std::optional<TerminationReason> termination;
};

// First pass of the tip within a watcher disc: the closest approach during
// the first inside-episode (discs containing the launch point arm only after
// the tip first leaves them).
struct PassRecord {
    double length = 0.0;    // grown length at closest approach
    Vec2 tip;
    Vec2 heading;
    double distance = 0.0;  // closest-approach distance to the disc center
};

class Deployment {
  public:
    // The map must outlive the deployment. Initial heading comes from
    // map.start_angle when set, else start_angle_override, else 0.
    Deployment(const MapModel& map, RobotDesign design, ModelConfig cfg = {},
               std::optional<double> start_angle_override = std::nullopt);

    // Advance one event. Returns false once the deployment is finished.
    bool step();
    // Run until the design is exhausted or the deployment terminates.
    void run();

    // Extend the program while deploying (clears a length-reached stop).
    void append_segment(DesignSegment seg);

    std::size_t add_watcher(Vec2 center, double radius);
    const std::optional<PassRecord>& pass(std::size_t watcher) const;
    // Stop stepping as soon as every watcher has recorded a pass.
    void stop_when_all_watchers_pass(bool enable) { stop_on_passes_ = enable; }

    const RobotState& state() const { return state_; }
    const DeploymentTrace& trace() const { return trace_; }
    double grown() const { return grown_; }
    double target_length() const { return target_; }
    bool finished() const;
    std::optional<TerminationReason> termination() const { return trace_.termination; }

    struct SlideCtx;  // closed-form contact-episode geometry (internal)

  private:
    struct Watcher {
        Vec2 center;
        double radius;
        bool armed;       // false while waiting to leave a disc we started inside
        bool recording;   // inside the first armed episode
        PassRecord best;
        std::optional<PassRecord> result;
    };

    void free_step();
    void slide_step();
    void process_eversion(bool in_contact);
    void handle_corner(const SlideCtx& ctx, double s_corner);
    void terminate(TerminationReason r);
    void record_free_move(Vec2 from, Vec2 to, double len_from);
    void record_slide_move(const SlideCtx& ctx, double s_end, std::size_t pivot);
    void update_touching();
    void remove_straight_pivots(int keep_pivot);
    void add_contact_pivot_at_tip(int obstacle, Vec2 old_edge_normal);
    template <typename LengthAt, typename HeadingAt>
    void watch_segment(Vec2 a, Vec2 b, LengthAt&& length_at, HeadingAt&& heading_at);
    void finalize_watchers();
    bool all_watchers_passed() const;

    const MapModel* map_;
    RobotDesign design_;
    ModelConfig cfg_;
    RobotState state_;
    DeploymentTrace trace_;
    double grown_ = 0.0;
    double target_ = 0.0;
    std::vector<std::pair<double, double>> everts_;  // (cumulative length, bend)
    std::size_t next_evert_ = 0;
    // Active tip contact (slide mode).
    struct TipContact {
        std::size_t obstacle;
        std::size_t edge;
    };
    std::optional<TipContact> contact_;
    // Contact-episode bookkeeping: corner-entered (obstacle, edge, direction)
    // keys, to detect circulation.
    std::vector<std::tuple<std::size_t, std::size_t, int>> visited_;
    int episode_begins_ = 0;
    std::vector<Watcher> watchers_;
    bool stop_on_passes_ = false;
};

// Deploy a design and return its trace.
DeploymentTrace deploy(const MapModel& map, const RobotDesign& design, ModelConfig cfg = {},
                       std::optional<double> start_angle_override = std::nullopt);

}  // namespace vinenav
