#ifndef VINENAV_H
#define VINENAV_H

/* C interface to the vinenav growing-robot simulation and planning library.
 *
 * All handles are opaque and owned by the caller (free with the matching
 * vn_*_free). Functions returning vn_status set a thread-local message
 * readable via vn_last_error() on failure. Lengths are meters, angles
 * radians.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vn_status {
    VN_OK = 0,
    VN_E_PARSE = 2,       /* malformed or invalid document */
    VN_E_SIMULATE = 3,    /* deployment failed outright */
    VN_E_UNREACHABLE = 4, /* no route to the goal */
    VN_E_INFEASIBLE = 5,  /* route found but a waypoint cannot be reached */
    VN_E_INVALID = 6,     /* bad argument */
    VN_E_IO = 7,          /* file read/write failure */
    VN_E_INTERNAL = 8
} vn_status;

typedef struct vn_map vn_map;
typedef struct vn_design vn_design;
typedef struct vn_trace vn_trace;
typedef struct vn_plan vn_plan;

const char* vn_version(void);
/* Message from the calling thread's most recent failure. */
const char* vn_last_error(void);
/* Free a string returned through a char** out-parameter. */
void vn_string_free(char* s);

/* ---- maps ---------------------------------------------------------- */

vn_status vn_map_parse(const char* json_text, vn_map** out);
vn_status vn_map_load(const char* path, vn_map** out);
vn_status vn_map_emit(const vn_map* m, char** out_json);
void vn_map_free(vn_map* m);

void vn_map_bounds(const vn_map* m, double* min_x, double* min_y, double* max_x, double* max_y);
size_t vn_map_obstacle_count(const vn_map* m);
size_t vn_map_obstacle_size(const vn_map* m, size_t obstacle);
void vn_map_obstacle_vertex(const vn_map* m, size_t obstacle, size_t vertex, double* x,
                            double* y);
void vn_map_start(const vn_map* m, double* x, double* y);
/* Returns 1 and writes the fixed launch angle, or returns 0 (free aim). */
int vn_map_start_angle(const vn_map* m, double* angle_rad);
void vn_map_goal(const vn_map* m, double* x, double* y);
double vn_map_success_radius(const vn_map* m);

/* ---- designs ------------------------------------------------------- */

vn_status vn_design_parse(const char* json_text, vn_design** out);
vn_status vn_design_load(const char* path, vn_design** out);
vn_status vn_design_emit(const vn_design* d, char** out_json);
void vn_design_free(vn_design* d);

size_t vn_design_segment_count(const vn_design* d);
void vn_design_segment(const vn_design* d, size_t i, double* length_m, double* turn_rad);
double vn_design_theta_max(const vn_design* d);

/* ---- simulation ----------------------------------------------------- */

/* Deploy the design into the map. If the map's start angle is free, pass
 * have_start_angle = 1 to launch at start_angle_rad (0 rad otherwise).
 * policy 0 selects the most proximal unsupported pivot, 1 the most distal. */
vn_status vn_simulate(const vn_map* m, const vn_design* d, int have_start_angle,
                      double start_angle_rad, int policy, vn_trace** out);
void vn_trace_free(vn_trace* t);

typedef struct vn_event {
    const char* type; /* static string, e.g. "free-growth" */
    double length_m;  /* grown length when the event completed */
    double from_x, from_y, to_x, to_y; /* tip endpoints for growth/slide */
    int32_t pivot;    /* -1 when not applicable */
    int32_t obstacle; /* -1 when not applicable */
    double angle_rad; /* everted bend or swept rotation */
    const char* reason; /* termination reason, NULL otherwise */
} vn_event;

size_t vn_trace_event_count(const vn_trace* t);
vn_status vn_trace_event(const vn_trace* t, size_t i, vn_event* out);
size_t vn_trace_tip_path_count(const vn_trace* t);
void vn_trace_tip_path(const vn_trace* t, size_t i, double* x, double* y, double* length_m);
/* NULL while the deployment has not terminated. */
const char* vn_trace_termination(const vn_trace* t);
void vn_trace_final_tip(const vn_trace* t, double* x, double* y);
double vn_trace_final_heading(const vn_trace* t);
double vn_trace_final_length(const vn_trace* t);
size_t vn_trace_pivot_count(const vn_trace* t);
void vn_trace_pivot(const vn_trace* t, size_t i, double* x, double* y, const char** kind,
                    int32_t* obstacle);
/* Closest approach of the (piecewise-linear) tip path to a point. */
void vn_trace_closest_approach(const vn_trace* t, double x, double y, double* distance,
                               double* length_m);
vn_status vn_trace_emit(const vn_trace* t, char** out_json);

/* ---- Monte-Carlo evaluation ----------------------------------------- */

typedef struct vn_estimate {
    uint64_t trials;
    uint64_t successes;
    uint64_t error_failures; /* wedged / degenerate / trapped / out-of-bounds */
    double probability;
    double wilson_lo; /* 95% Wilson score interval */
    double wilson_hi;
    uint64_t seed;
} vn_estimate;

/* Success probability of the design under manufacturing noise (uniform
 * +/- sigma bounds) and optional map-vertex noise. Deterministic per seed;
 * threads is a hint only (0 = VINE_NAV_THREADS or serial). */
vn_status vn_mc_success(const vn_map* m, const vn_design* d, double sigma_length_m,
                        double sigma_turn_rad, uint64_t trials, uint64_t seed,
                        double map_noise_m, int threads, vn_estimate* out);

/* ---- planning -------------------------------------------------------- */

typedef struct vn_plan_params {
    double sigma_length_m;
    double sigma_turn_rad;
    double theta_max_rad;       /* <= 0: pi/2 */
    double turn_step_rad;       /* <= 0: 1 degree */
    uint64_t particles;         /* 0: 400 */
    uint64_t interior_waypoints;
    uint64_t seed;
    uint64_t eval_trials;       /* 0: 2000 */
} vn_plan_params;

vn_status vn_plan_run(const vn_map* m, const vn_plan_params* p, vn_plan** out);
void vn_plan_free(vn_plan* p);

/* The synthesized design (new handle; free it). */
vn_status vn_plan_design(const vn_plan* p, vn_design** out);
double vn_plan_initial_heading(const vn_plan* p);
uint32_t vn_plan_turn_weight(const vn_plan* p);
size_t vn_plan_route_count(const vn_plan* p);
void vn_plan_route_point(const vn_plan* p, size_t i, double* x, double* y);
size_t vn_plan_stage_count(const vn_plan* p);
void vn_plan_stage(const vn_plan* p, size_t i, double* turn_rad, double* length_m,
                   double* success, uint64_t* survivors);
void vn_plan_estimate(const vn_plan* p, vn_estimate* out);

#ifdef __cplusplus
}
#endif

#endif /* VINENAV_H */
