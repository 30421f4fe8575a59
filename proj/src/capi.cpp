#include "vinenav/vinenav.h"

#include <cstring>
#include <string>

#include "vinenav/deployment.hpp"
#include "vinenav/geometry.hpp"
#include "vinenav/io.hpp"
#include "vinenav/kinematics.hpp"
#include "vinenav/planner.hpp"
#include "vinenav/uncertainty.hpp"

using namespace vinenav;

struct vn_map {
    MapModel m;
};
struct vn_design {
    DesignDoc d;
};
struct vn_trace {
    DeploymentTrace t;
    RobotState final_state;
};
struct vn_plan {
    PlanResult r;
    double theta_max;
};

namespace {

thread_local std::string g_error;

vn_status fail(vn_status s, const char* msg) {
    g_error = msg;
    return s;
}

template <typename F>
vn_status guarded(F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        return fail(VN_E_PARSE, e.what());
    } catch (const PlanError& e) {
        return fail(e.code == PlanError::Code::unreachable ? VN_E_UNREACHABLE : VN_E_INFEASIBLE,
                    e.what());
    } catch (const std::invalid_argument& e) {
        return fail(VN_E_INVALID, e.what());
    } catch (const std::domain_error& e) {
        return fail(VN_E_SIMULATE, e.what());
    } catch (const std::runtime_error& e) {
        return fail(VN_E_IO, e.what());
    } catch (const std::exception& e) {
        return fail(VN_E_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* vn_version(void) { return "0.1.0"; }

const char* vn_last_error(void) { return g_error.c_str(); }

void vn_string_free(char* s) { delete[] s; }

/* ---- maps ---------------------------------------------------------- */

vn_status vn_map_parse(const char* json_text, vn_map** out) {
    if (!json_text || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out = new vn_map{parse_map(json_text)};
        return VN_OK;
    });
}

vn_status vn_map_load(const char* path, vn_map** out) {
    if (!path || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out = new vn_map{load_map(path)};
        return VN_OK;
    });
}

vn_status vn_map_emit(const vn_map* m, char** out_json) {
    if (!m || !out_json) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out_json = dup_string(emit_map(m->m));
        return VN_OK;
    });
}

void vn_map_free(vn_map* m) { delete m; }

void vn_map_bounds(const vn_map* m, double* min_x, double* min_y, double* max_x, double* max_y) {
    if (min_x) *min_x = m->m.bounds.min.x;
    if (min_y) *min_y = m->m.bounds.min.y;
    if (max_x) *max_x = m->m.bounds.max.x;
    if (max_y) *max_y = m->m.bounds.max.y;
}

size_t vn_map_obstacle_count(const vn_map* m) { return m->m.obstacles.size(); }

size_t vn_map_obstacle_size(const vn_map* m, size_t obstacle) {
    return obstacle < m->m.obstacles.size() ? m->m.obstacles[obstacle].size() : 0;
}

void vn_map_obstacle_vertex(const vn_map* m, size_t obstacle, size_t vertex, double* x,
                            double* y) {
    if (obstacle >= m->m.obstacles.size()) return;
    const Polygon& p = m->m.obstacles[obstacle];
    if (vertex >= p.size()) return;
    if (x) *x = p.vertices[vertex].x;
    if (y) *y = p.vertices[vertex].y;
}

void vn_map_start(const vn_map* m, double* x, double* y) {
    if (x) *x = m->m.start.x;
    if (y) *y = m->m.start.y;
}

int vn_map_start_angle(const vn_map* m, double* angle_rad) {
    if (!m->m.start_angle) return 0;
    if (angle_rad) *angle_rad = *m->m.start_angle;
    return 1;
}

void vn_map_goal(const vn_map* m, double* x, double* y) {
    if (x) *x = m->m.goal.x;
    if (y) *y = m->m.goal.y;
}

double vn_map_success_radius(const vn_map* m) { return m->m.success_radius; }

/* ---- designs ------------------------------------------------------- */

vn_status vn_design_parse(const char* json_text, vn_design** out) {
    if (!json_text || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out = new vn_design{parse_design(json_text)};
        return VN_OK;
    });
}

vn_status vn_design_load(const char* path, vn_design** out) {
    if (!path || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out = new vn_design{load_design(path)};
        return VN_OK;
    });
}

vn_status vn_design_emit(const vn_design* d, char** out_json) {
    if (!d || !out_json) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out_json = dup_string(emit_design(d->d.design, d->d.theta_max));
        return VN_OK;
    });
}

void vn_design_free(vn_design* d) { delete d; }

size_t vn_design_segment_count(const vn_design* d) { return d->d.design.segments.size(); }

void vn_design_segment(const vn_design* d, size_t i, double* length_m, double* turn_rad) {
    if (i >= d->d.design.segments.size()) return;
    if (length_m) *length_m = d->d.design.segments[i].length;
    if (turn_rad) *turn_rad = d->d.design.segments[i].turn;
}

double vn_design_theta_max(const vn_design* d) { return d->d.theta_max; }

/* ---- simulation ----------------------------------------------------- */

vn_status vn_simulate(const vn_map* m, const vn_design* d, int have_start_angle,
                      double start_angle_rad, int policy, vn_trace** out) {
    if (!m || !d || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        ModelConfig cfg;
        cfg.policy = policy == 1 ? PivotPolicy::most_distal_unsupported
                                 : PivotPolicy::most_proximal_unsupported;
        std::optional<double> override;
        if (have_start_angle) override = start_angle_rad;
        Deployment dep(m->m, d->d.design, cfg, override);
        dep.run();
        *out = new vn_trace{dep.trace(), dep.state()};
        return VN_OK;
    });
}

void vn_trace_free(vn_trace* t) { delete t; }

size_t vn_trace_event_count(const vn_trace* t) { return t->t.events.size(); }

vn_status vn_trace_event(const vn_trace* t, size_t i, vn_event* out) {
    if (!t || !out) return fail(VN_E_INVALID, "null argument");
    if (i >= t->t.events.size()) return fail(VN_E_INVALID, "event index out of range");
    const TraceEvent& e = t->t.events[i];
    out->type = to_string(e.type);
    out->length_m = e.length;
    out->from_x = e.from.x;
    out->from_y = e.from.y;
    out->to_x = e.to.x;
    out->to_y = e.to.y;
    out->pivot = e.pivot;
    out->obstacle = e.obstacle;
    out->angle_rad = e.angle;
    out->reason = e.type == EventType::terminated ? to_string(e.reason) : nullptr;
    return VN_OK;
}

size_t vn_trace_tip_path_count(const vn_trace* t) { return t->t.tip_path.size(); }

void vn_trace_tip_path(const vn_trace* t, size_t i, double* x, double* y, double* length_m) {
    if (i >= t->t.tip_path.size()) return;
    if (x) *x = t->t.tip_path[i].x;
    if (y) *y = t->t.tip_path[i].y;
    if (length_m) *length_m = t->t.tip_path_length[i];
}

const char* vn_trace_termination(const vn_trace* t) {
    return t->t.termination ? to_string(*t->t.termination) : nullptr;
}

void vn_trace_final_tip(const vn_trace* t, double* x, double* y) {
    if (x) *x = t->final_state.tip.x;
    if (y) *y = t->final_state.tip.y;
}

double vn_trace_final_heading(const vn_trace* t) { return t->final_state.heading.angle(); }

double vn_trace_final_length(const vn_trace* t) { return t->final_state.length(); }

size_t vn_trace_pivot_count(const vn_trace* t) { return t->final_state.pivots.size(); }

void vn_trace_pivot(const vn_trace* t, size_t i, double* x, double* y, const char** kind,
                    int32_t* obstacle) {
    if (i >= t->final_state.pivots.size()) return;
    const PivotPoint& p = t->final_state.pivots[i];
    if (x) *x = p.position.x;
    if (y) *y = p.position.y;
    if (kind) {
        switch (p.kind) {
            case PivotKind::base: *kind = "base"; break;
            case PivotKind::contact: *kind = "contact"; break;
            case PivotKind::designed_turn: *kind = "designed_turn"; break;
        }
    }
    if (obstacle) *obstacle = p.obstacle;
}

void vn_trace_closest_approach(const vn_trace* t, double x, double y, double* distance,
                               double* length_m) {
    Vec2 c{x, y};
    const auto& path = t->t.tip_path;
    double best = dist(path.empty() ? t->final_state.tip : path[0], c);
    double best_len = path.empty() ? t->final_state.length() : t->t.tip_path_length[0];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        Vec2 a = path[i], b = path[i + 1];
        Vec2 q = closest_on_segment(c, a, b);
        double dq = dist(q, c);
        if (dq < best) {
            best = dq;
            double seg = dist(a, b);
            double frac = seg > 0.0 ? dist(a, q) / seg : 0.0;
            best_len = t->t.tip_path_length[i] +
                       frac * (t->t.tip_path_length[i + 1] - t->t.tip_path_length[i]);
        }
    }
    if (distance) *distance = best;
    if (length_m) *length_m = best_len;
}

vn_status vn_trace_emit(const vn_trace* t, char** out_json) {
    if (!t || !out_json) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        *out_json = dup_string(emit_trace(t->t, t->final_state));
        return VN_OK;
    });
}

/* ---- Monte-Carlo evaluation ----------------------------------------- */

namespace {
void copy_estimate(const SuccessEstimate& s, vn_estimate* out) {
    out->trials = s.trials;
    out->successes = s.successes;
    out->error_failures = s.error_failures;
    out->probability = s.probability;
    out->wilson_lo = s.wilson_lo;
    out->wilson_hi = s.wilson_hi;
    out->seed = s.seed;
}
}  // namespace

vn_status vn_mc_success(const vn_map* m, const vn_design* d, double sigma_length_m,
                        double sigma_turn_rad, uint64_t trials, uint64_t seed,
                        double map_noise_m, int threads, vn_estimate* out) {
    if (!m || !d || !out) return fail(VN_E_INVALID, "null argument");
    if (trials == 0) return fail(VN_E_INVALID, "trials must be >= 1");
    if (sigma_length_m < 0.0 || sigma_turn_rad < 0.0 || map_noise_m < 0.0)
        return fail(VN_E_INVALID, "noise bounds must be non-negative");
    return guarded([&] {
        UncertaintyModel u{sigma_length_m, sigma_turn_rad};
        SuccessEstimate s =
            mc_success(m->m, d->d.design, u, trials, seed, map_noise_m, {}, threads);
        copy_estimate(s, out);
        return VN_OK;
    });
}

/* ---- planning -------------------------------------------------------- */

vn_status vn_plan_run(const vn_map* m, const vn_plan_params* p, vn_plan** out) {
    if (!m || !p || !out) return fail(VN_E_INVALID, "null argument");
    return guarded([&] {
        PlanParams pp;
        pp.uncertainty.sigma_length = p->sigma_length_m;
        pp.uncertainty.sigma_turn = p->sigma_turn_rad;
        if (p->theta_max_rad > 0.0) pp.graph.theta_max = p->theta_max_rad;
        if (p->turn_step_rad > 0.0) pp.turn_step = p->turn_step_rad;
        if (p->particles > 0) pp.particles = p->particles;
        pp.interior_waypoints = p->interior_waypoints;
        pp.seed = p->seed;
        if (p->eval_trials > 0) pp.eval_trials = p->eval_trials;
        *out = new vn_plan{plan(m->m, pp), pp.graph.theta_max};
        return VN_OK;
    });
}

void vn_plan_free(vn_plan* p) { delete p; }

vn_status vn_plan_design(const vn_plan* p, vn_design** out) {
    if (!p || !out) return fail(VN_E_INVALID, "null argument");
    *out = new vn_design{DesignDoc{p->r.design, p->theta_max}};
    return VN_OK;
}

double vn_plan_initial_heading(const vn_plan* p) { return p->r.initial_heading; }

uint32_t vn_plan_turn_weight(const vn_plan* p) {
    return static_cast<uint32_t>(p->r.route.turn_weight);
}

size_t vn_plan_route_count(const vn_plan* p) { return p->r.route_positions.size(); }

void vn_plan_route_point(const vn_plan* p, size_t i, double* x, double* y) {
    if (i >= p->r.route_positions.size()) return;
    if (x) *x = p->r.route_positions[i].x;
    if (y) *y = p->r.route_positions[i].y;
}

size_t vn_plan_stage_count(const vn_plan* p) { return p->r.stages.size(); }

void vn_plan_stage(const vn_plan* p, size_t i, double* turn_rad, double* length_m,
                   double* success, uint64_t* survivors) {
    if (i >= p->r.stages.size()) return;
    const StageReport& s = p->r.stages[i];
    if (turn_rad) *turn_rad = s.turn;
    if (length_m) *length_m = s.length;
    if (success) *success = s.success;
    if (survivors) *survivors = s.survivors;
}

void vn_plan_estimate(const vn_plan* p, vn_estimate* out) {
    if (out) copy_estimate(p->r.estimate, out);
}

}  // extern "C"
