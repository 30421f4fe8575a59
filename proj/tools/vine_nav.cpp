// vine_nav: command-line front end over the shared library's C interface.
//
// Subcommands: simulate, plan, evaluate, sweep. User-facing angles are in
// degrees; all files use meters. Exit codes: 0 ok, 2 parse error,
// 3 deployment error, 4 unreachable goal, 5 infeasible waypoint.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vinenav/vinenav.h"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void die(int code, const std::string& msg) {
    std::fprintf(stderr, "vine_nav: %s\n", msg.c_str());
    std::exit(code);
}

int exit_code(vn_status s) {
    switch (s) {
        case VN_OK: return 0;
        case VN_E_PARSE: return 2;
        case VN_E_IO: return 2;  // unreadable input document
        case VN_E_SIMULATE: return 3;
        case VN_E_UNREACHABLE: return 4;
        case VN_E_INFEASIBLE: return 5;
        default: return 1;
    }
}

void check(vn_status s) {
    if (s != VN_OK) die(exit_code(s), vn_last_error());
}

using map_ptr = std::unique_ptr<vn_map, void (*)(vn_map*)>;
using design_ptr = std::unique_ptr<vn_design, void (*)(vn_design*)>;
using trace_ptr = std::unique_ptr<vn_trace, void (*)(vn_trace*)>;
using plan_ptr = std::unique_ptr<vn_plan, void (*)(vn_plan*)>;

map_ptr load_map(const std::string& path) {
    vn_map* m = nullptr;
    check(vn_map_load(path.c_str(), &m));
    return {m, &vn_map_free};
}

design_ptr load_design(const std::string& path) {
    vn_design* d = nullptr;
    check(vn_design_load(path.c_str(), &d));
    return {d, &vn_design_free};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) die(1, "cannot open " + path + " for writing");
    f << content;
    if (!f.good()) die(1, "write failed on " + path);
}

// ---------------------------------------------------------------------------
// SVG rendering

struct SvgFrame {
    double min_x, min_y, max_x, max_y;
    double scale, width, height;
    static constexpr double kMargin = 20.0;

    SvgFrame(double x0, double y0, double x1, double y1)
        : min_x(x0), min_y(y0), max_x(x1), max_y(y1) {
        double w = std::max(max_x - min_x, 1e-9), h = std::max(max_y - min_y, 1e-9);
        scale = 760.0 / std::max(w, h);
        width = w * scale + 2 * kMargin;
        height = h * scale + 2 * kMargin;
    }
    double X(double x) const { return kMargin + (x - min_x) * scale; }
    double Y(double y) const { return height - kMargin - (y - min_y) * scale; }
};

std::string svg_open(const SvgFrame& f) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fmt(f.width) + "\" height=\"" + fmt(f.height) + "\" viewBox=\"0 0 " + fmt(f.width) +
           " " + fmt(f.height) + "\">\n";
}

std::string circle_path(const SvgFrame& f, double cx, double cy, double r_world,
                        const std::string& cls, const std::string& style) {
    double r = r_world * f.scale;
    double x = f.X(cx), y = f.Y(cy);
    return "  <path class=\"" + cls + "\" d=\"M " + fmt(x - r) + " " + fmt(y) + " A " + fmt(r) +
           " " + fmt(r) + " 0 1 0 " + fmt(x + r) + " " + fmt(y) + " A " + fmt(r) + " " + fmt(r) +
           " 0 1 0 " + fmt(x - r) + " " + fmt(y) + " Z\" " + style + "/>\n";
}

std::string marker_path(const SvgFrame& f, double cx, double cy, double r_px,
                        const std::string& cls, const std::string& style) {
    double x = f.X(cx), y = f.Y(cy);
    return "  <path class=\"" + cls + "\" d=\"M " + fmt(x - r_px) + " " + fmt(y) + " L " + fmt(x) +
           " " + fmt(y - r_px) + " L " + fmt(x + r_px) + " " + fmt(y) + " L " + fmt(x) + " " +
           fmt(y + r_px) + " Z\" " + style + "/>\n";
}

// Tip position at a given grown length, interpolated on the tip path.
void tip_at_length(const vn_trace* t, double len, double* x, double* y) {
    std::size_t n = vn_trace_tip_path_count(t);
    double px = 0, py = 0, pl = 0;
    vn_trace_tip_path(t, 0, &px, &py, &pl);
    for (std::size_t i = 1; i < n; ++i) {
        double cx, cy, cl;
        vn_trace_tip_path(t, i, &cx, &cy, &cl);
        if (len <= cl + 1e-15) {
            double f = cl > pl ? (len - pl) / (cl - pl) : 1.0;
            f = std::clamp(f, 0.0, 1.0);
            *x = px + f * (cx - px);
            *y = py + f * (cy - py);
            return;
        }
        px = cx;
        py = cy;
        pl = cl;
    }
    *x = px;
    *y = py;
}

std::string render_simulation_svg(const vn_map* map, const vn_trace* trace) {
    double x0, y0, x1, y1;
    vn_map_bounds(map, &x0, &y0, &x1, &y1);
    SvgFrame f(x0, y0, x1, y1);
    std::string s = svg_open(f);
    s += "  <rect x=\"" + fmt(f.X(x0)) + "\" y=\"" + fmt(f.Y(y1)) + "\" width=\"" +
         fmt((x1 - x0) * f.scale) + "\" height=\"" + fmt((y1 - y0) * f.scale) +
         "\" fill=\"#ffffff\" stroke=\"#222222\"/>\n";

    for (std::size_t i = 0; i < vn_map_obstacle_count(map); ++i) {
        std::string d;
        for (std::size_t k = 0; k < vn_map_obstacle_size(map, i); ++k) {
            double vx, vy;
            vn_map_obstacle_vertex(map, i, k, &vx, &vy);
            d += (k ? " L " : "M ") + fmt(f.X(vx)) + " " + fmt(f.Y(vy));
        }
        d += " Z";
        s += "  <path class=\"obstacle\" d=\"" + d +
             "\" fill=\"#c8c8c8\" stroke=\"#555555\"/>\n";
    }

    double gx, gy;
    vn_map_goal(map, &gx, &gy);
    s += circle_path(f, gx, gy, vn_map_success_radius(map), "goal",
                     "fill=\"#d4f7d4\" stroke=\"#2e8b2e\"");

    double sx, sy;
    vn_map_start(map, &sx, &sy);
    s += marker_path(f, sx, sy, 5.0, "start", "fill=\"#2e2e8b\"");

    for (std::size_t i = 0; i < vn_trace_event_count(trace); ++i) {
        vn_event e;
        vn_trace_event(trace, i, &e);
        std::string type = e.type;
        if (type == "free-growth" || type == "slide") {
            const char* color = type == "slide" ? "#d22" : "#17a";
            s += "  <path class=\"" + type + "\" d=\"M " + fmt(f.X(e.from_x)) + " " +
                 fmt(f.Y(e.from_y)) + " L " + fmt(f.X(e.to_x)) + " " + fmt(f.Y(e.to_y)) +
                 "\" stroke=\"" + color + "\" stroke-width=\"2\" fill=\"none\"/>\n";
        } else {
            double mx, my;
            tip_at_length(trace, e.length_m, &mx, &my);
            const char* color = type == "terminated" ? "#000" : "#e6a100";
            s += marker_path(f, mx, my, 4.0, type, std::string("fill=\"") + color + "\"");
        }
    }

    for (std::size_t i = 0; i < vn_trace_pivot_count(trace); ++i) {
        double px, py;
        const char* kind = "";
        int32_t obstacle = -1;
        vn_trace_pivot(trace, i, &px, &py, &kind, &obstacle);
        s += circle_path(f, px, py, 3.0 / f.scale, std::string("pivot_") + kind,
                         "fill=\"none\" stroke=\"#7a2ea0\" stroke-width=\"1.5\"");
    }

    s += "</svg>\n";
    return s;
}

std::string render_curve_svg(const std::string& x_label, const std::vector<double>& xs,
                             const std::vector<double>& ys) {
    SvgFrame f(0, 0, 1, 1);
    double lo = xs.empty() ? 0 : xs.front(), hi = xs.empty() ? 1 : xs.back();
    if (hi <= lo) hi = lo + 1;
    auto X = [&](double v) { return f.X((v - lo) / (hi - lo)); };
    auto Y = [&](double p) { return f.Y(p); };
    std::string s = svg_open(f);
    s += "  <path class=\"axis\" d=\"M " + fmt(X(lo)) + " " + fmt(Y(0)) + " L " + fmt(X(hi)) +
         " " + fmt(Y(0)) + "\" stroke=\"#000\" fill=\"none\"/>\n";
    s += "  <path class=\"axis\" d=\"M " + fmt(X(lo)) + " " + fmt(Y(0)) + " L " + fmt(X(lo)) +
         " " + fmt(Y(1)) + "\" stroke=\"#000\" fill=\"none\"/>\n";
    std::string d;
    for (std::size_t i = 0; i < xs.size(); ++i)
        d += (i ? " L " : "M ") + fmt(X(xs[i])) + " " + fmt(Y(ys[i]));
    if (!xs.empty())
        s += "  <path class=\"curve\" d=\"" + d +
             "\" stroke=\"#17a\" stroke-width=\"2\" fill=\"none\"/>\n";
    s += "  <text x=\"" + fmt(f.width / 2) + "\" y=\"" + fmt(f.height - 2) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + x_label + "</text>\n";
    s += "</svg>\n";
    return s;
}

// ---------------------------------------------------------------------------
// CSV

const char* kCsvHeader =
    "sigma_theta_deg,sigma_l_m,map_noise_m,trials,successes,probability,wilson_lo,wilson_hi,"
    "seed\n";

std::string csv_row(double sigma_theta_deg, double sigma_l_m, double map_noise_m,
                    const vn_estimate& e) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%" PRIu64 ",%" PRIu64 ",%s,%s,%s,%" PRIu64 "\n",
                  fmt(sigma_theta_deg).c_str(), fmt(sigma_l_m).c_str(), fmt(map_noise_m).c_str(),
                  e.trials, e.successes, fmt(e.probability).c_str(), fmt(e.wilson_lo).c_str(),
                  fmt(e.wilson_hi).c_str(), e.seed);
    return buf;
}

// ---------------------------------------------------------------------------
// Subcommands

struct SimulateOpts {
    std::string map, design, out_svg, out_trace, policy = "proximal";
    std::optional<double> start_angle_deg;
};

int cmd_simulate(const SimulateOpts& o) {
    map_ptr map = load_map(o.map);
    design_ptr design = load_design(o.design);
    vn_trace* raw = nullptr;
    check(vn_simulate(map.get(), design.get(), o.start_angle_deg ? 1 : 0,
                      o.start_angle_deg.value_or(0.0) * kDeg, o.policy == "distal" ? 1 : 0,
                      &raw));
    trace_ptr trace(raw, &vn_trace_free);

    if (!o.out_trace.empty()) {
        char* json = nullptr;
        check(vn_trace_emit(trace.get(), &json));
        write_file(o.out_trace, json);
        vn_string_free(json);
    }
    if (!o.out_svg.empty()) write_file(o.out_svg, render_simulation_svg(map.get(), trace.get()));

    double tx, ty;
    vn_trace_final_tip(trace.get(), &tx, &ty);
    const char* term = vn_trace_termination(trace.get());
    std::printf("termination: %s\n", term ? term : "running");
    std::printf("final_tip: %s %s\n", fmt(tx).c_str(), fmt(ty).c_str());
    std::printf("final_length_m: %s\n", fmt(vn_trace_final_length(trace.get())).c_str());
    std::printf("events: %zu\n", vn_trace_event_count(trace.get()));
    // length-reached and out-of-bounds are normal ends; the rest mean the
    // model could not keep growing the design
    if (term && (std::string(term) == "wedged" || std::string(term) == "degenerate-contact" ||
                 std::string(term) == "trapped"))
        die(3, "deployment ended in " + std::string(term));
    return 0;
}

struct PlanOpts {
    std::string map, out_design, out_report;
    double sigma_theta_deg = 0.0, sigma_l_m = 0.0;
    double theta_max_deg = 90.0, turn_step_deg = 1.0;
    std::uint64_t samples = 400, interior = 0, seed = 1, eval_trials = 2000;
};

int cmd_plan(const PlanOpts& o) {
    map_ptr map = load_map(o.map);
    vn_plan_params p{};
    p.sigma_length_m = o.sigma_l_m;
    p.sigma_turn_rad = o.sigma_theta_deg * kDeg;
    p.theta_max_rad = o.theta_max_deg * kDeg;
    p.turn_step_rad = o.turn_step_deg * kDeg;
    p.particles = o.samples;
    p.interior_waypoints = o.interior;
    p.seed = o.seed;
    p.eval_trials = o.eval_trials;

    vn_plan* raw = nullptr;
    check(vn_plan_run(map.get(), &p, &raw));
    plan_ptr plan(raw, &vn_plan_free);

    vn_design* draw = nullptr;
    check(vn_plan_design(plan.get(), &draw));
    design_ptr design(draw, &vn_design_free);

    if (!o.out_design.empty()) {
        char* json = nullptr;
        check(vn_design_emit(design.get(), &json));
        write_file(o.out_design, json);
        vn_string_free(json);
    }

    // Nominal deployment (aim is encoded in the design for free-start maps).
    vn_trace* traw = nullptr;
    check(vn_simulate(map.get(), design.get(), 0, 0.0, 0, &traw));
    trace_ptr trace(traw, &vn_trace_free);
    std::size_t contact_events = 0;
    for (std::size_t i = 0; i < vn_trace_event_count(trace.get()); ++i) {
        vn_event e;
        vn_trace_event(trace.get(), i, &e);
        if (std::string(e.type) == "contact-start") ++contact_events;
    }

    vn_estimate est;
    vn_plan_estimate(plan.get(), &est);

    std::size_t nseg = vn_design_segment_count(design.get());
    std::size_t turns = 0;
    for (std::size_t i = 0; i < nseg; ++i) {
        double len, turn;
        vn_design_segment(design.get(), i, &len, &turn);
        bool aim = i == 0 && !vn_map_start_angle(map.get(), nullptr);
        if (turn != 0.0 && !aim) ++turns;
    }

    if (!o.out_report.empty()) {
        ordered_json r;
        r["turn_weight"] = vn_plan_turn_weight(plan.get());
        ordered_json route = ordered_json::array();
        for (std::size_t i = 0; i < vn_plan_route_count(plan.get()); ++i) {
            double x, y;
            vn_plan_route_point(plan.get(), i, &x, &y);
            route.push_back({x, y});
        }
        r["route"] = std::move(route);
        r["initial_heading_deg"] = vn_plan_initial_heading(plan.get()) / kDeg;
        ordered_json stages = ordered_json::array();
        for (std::size_t i = 0; i < vn_plan_stage_count(plan.get()); ++i) {
            double turn, len, success;
            std::uint64_t survivors;
            vn_plan_stage(plan.get(), i, &turn, &len, &success, &survivors);
            stages.push_back({{"turn_deg", turn / kDeg},
                              {"length_m", len},
                              {"success", success},
                              {"survivors", survivors}});
        }
        r["stages"] = std::move(stages);
        r["manufactured_turns"] = turns;
        r["estimate"] = {{"trials", est.trials},
                         {"successes", est.successes},
                         {"error_failures", est.error_failures},
                         {"probability", est.probability},
                         {"wilson_lo", est.wilson_lo},
                         {"wilson_hi", est.wilson_hi},
                         {"seed", est.seed}};
        double tx, ty;
        vn_trace_final_tip(trace.get(), &tx, &ty);
        const char* term = vn_trace_termination(trace.get());
        r["nominal_deployment"] = {{"termination", term ? term : "running"},
                                   {"contact_events", contact_events},
                                   {"final_tip", {tx, ty}}};
        write_file(o.out_report, r.dump(2) + "\n");
    }

    std::printf("segments: %zu\n", nseg);
    std::printf("manufactured_turns: %zu\n", turns);
    std::printf("contact_events: %zu\n", contact_events);
    std::printf("estimate: %s [%s, %s]\n", fmt(est.probability).c_str(),
                fmt(est.wilson_lo).c_str(), fmt(est.wilson_hi).c_str());
    return 0;
}

struct EvaluateOpts {
    std::string map, design, out_csv;
    double sigma_theta_deg = 0.0, sigma_l_m = 0.0, map_noise_m = 0.0;
    std::uint64_t trials = 1000, seed = 1;
    int threads = 0;
};

int cmd_evaluate(const EvaluateOpts& o) {
    map_ptr map = load_map(o.map);
    design_ptr design = load_design(o.design);
    vn_estimate e;
    check(vn_mc_success(map.get(), design.get(), o.sigma_l_m, o.sigma_theta_deg * kDeg, o.trials,
                        o.seed, o.map_noise_m, o.threads, &e));
    std::string csv = kCsvHeader + csv_row(o.sigma_theta_deg, o.sigma_l_m, o.map_noise_m, e);
    if (!o.out_csv.empty()) write_file(o.out_csv, csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

struct SweepOpts {
    std::string map, design, param = "sigma_theta", out_csv, out_svg;
    bool use_plan = false;
    std::vector<double> range;  // lo hi
    std::uint64_t steps = 11, trials = 1000, seed = 1;
    double sigma_theta_deg = 0.0, sigma_l_m = 0.0;
    int threads = 0;
    PlanOpts plan_opts;
};

int cmd_sweep(const SweepOpts& o) {
    map_ptr map = load_map(o.map);
    design_ptr design(nullptr, &vn_design_free);
    if (o.use_plan) {
        vn_plan_params p{};
        p.sigma_length_m = o.sigma_l_m;
        p.sigma_turn_rad = o.sigma_theta_deg * kDeg;
        p.seed = o.seed;
        vn_plan* praw = nullptr;
        check(vn_plan_run(map.get(), &p, &praw));
        plan_ptr plan(praw, &vn_plan_free);
        vn_design* draw = nullptr;
        check(vn_plan_design(plan.get(), &draw));
        design = design_ptr(draw, &vn_design_free);
    } else {
        design = load_design(o.design);
    }

    double lo = o.range.size() > 0 ? o.range[0] : 0.0;
    double hi = o.range.size() > 1 ? o.range[1] : lo;
    std::uint64_t n = o.steps < 1 ? 1 : o.steps;
    auto grid_at = [&](std::uint64_t i) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    };

    std::string csv;
    std::vector<double> xs, ys;
    if (o.param == "start_angle") {
        csv = "start_angle_deg,reached,min_distance_m,final_x,final_y,termination\n";
        double gx, gy;
        vn_map_goal(map.get(), &gx, &gy);
        double d = vn_map_success_radius(map.get());
        for (std::uint64_t i = 0; i < n; ++i) {
            double ang = grid_at(i);
            vn_trace* traw = nullptr;
            check(vn_simulate(map.get(), design.get(), 1, ang * kDeg, 0, &traw));
            trace_ptr trace(traw, &vn_trace_free);
            double md, ml, tx, ty;
            vn_trace_closest_approach(trace.get(), gx, gy, &md, &ml);
            vn_trace_final_tip(trace.get(), &tx, &ty);
            const char* term = vn_trace_termination(trace.get());
            int reached = md < d ? 1 : 0;
            csv += fmt(ang) + "," + std::to_string(reached) + "," + fmt(md) + "," + fmt(tx) +
                   "," + fmt(ty) + "," + (term ? term : "running") + "\n";
            xs.push_back(ang);
            ys.push_back(reached);
        }
    } else if (o.param == "sigma_theta" || o.param == "map_noise") {
        csv = kCsvHeader;
        for (std::uint64_t i = 0; i < n; ++i) {
            double v = grid_at(i);
            double sigma_theta = o.param == "sigma_theta" ? v : o.sigma_theta_deg;
            double noise = o.param == "map_noise" ? v : 0.0;
            vn_estimate e;
            check(vn_mc_success(map.get(), design.get(), o.sigma_l_m, sigma_theta * kDeg,
                                o.trials, o.seed, noise, o.threads, &e));
            csv += csv_row(sigma_theta, o.sigma_l_m, noise, e);
            xs.push_back(v);
            ys.push_back(e.probability);
        }
    } else {
        die(1, "unknown sweep parameter: " + o.param);
    }

    if (!o.out_csv.empty()) write_file(o.out_csv, csv);
    std::fputs(csv.c_str(), stdout);
    if (!o.out_svg.empty()) write_file(o.out_svg, render_curve_svg(o.param, xs, ys));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tip-everting growing robot: simulation, design synthesis, evaluation"};
    app.require_subcommand(1);

    SimulateOpts so;
    CLI::App* sim = app.add_subcommand("simulate", "deploy a design into a map");
    sim->add_option("--map", so.map, "map JSON file")->required();
    sim->add_option("--design", so.design, "design JSON file")->required();
    double sim_angle = 0.0;
    CLI::Option* sim_angle_opt =
        sim->add_option("--start-angle-deg", sim_angle, "launch angle for free-aim maps");
    sim->add_option("--policy", so.policy, "pivot selection policy (proximal|distal)")
        ->check(CLI::IsMember({"proximal", "distal"}));
    sim->add_option("--out-svg", so.out_svg, "deployment overlay SVG");
    sim->add_option("--out-trace", so.out_trace, "trace JSON");

    PlanOpts po;
    CLI::App* pl = app.add_subcommand("plan", "synthesize a design for a map");
    pl->add_option("--map", po.map, "map JSON file")->required();
    pl->add_option("--sigma-theta-deg", po.sigma_theta_deg, "turn noise bound, degrees");
    pl->add_option("--sigma-l-m", po.sigma_l_m, "length noise bound, meters");
    pl->add_option("--theta-max-deg", po.theta_max_deg, "manufacturable turn bound");
    pl->add_option("--turn-step-deg", po.turn_step_deg, "candidate turn resolution");
    pl->add_option("--samples", po.samples, "particles per stage");
    pl->add_option("--interior", po.interior, "extra interior waypoints");
    pl->add_option("--seed", po.seed, "random seed");
    pl->add_option("--eval-trials", po.eval_trials, "final Monte-Carlo trials");
    pl->add_option("--out-design", po.out_design, "output design JSON");
    pl->add_option("--out-report", po.out_report, "output report JSON");

    EvaluateOpts eo;
    CLI::App* ev = app.add_subcommand("evaluate", "Monte-Carlo success probability");
    ev->add_option("--map", eo.map, "map JSON file")->required();
    ev->add_option("--design", eo.design, "design JSON file")->required();
    ev->add_option("--sigma-theta-deg", eo.sigma_theta_deg, "turn noise bound, degrees");
    ev->add_option("--sigma-l-m", eo.sigma_l_m, "length noise bound, meters");
    ev->add_option("--map-noise-m", eo.map_noise_m, "map vertex noise sigma, meters");
    ev->add_option("--trials", eo.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    ev->add_option("--seed", eo.seed, "random seed");
    ev->add_option("--threads", eo.threads, "parallelism hint (never affects results)");
    ev->add_option("--out-csv", eo.out_csv, "output CSV");

    SweepOpts wo;
    CLI::App* sw = app.add_subcommand("sweep", "sweep a parameter against success");
    sw->add_option("--map", wo.map, "map JSON file")->required();
    CLI::Option* sw_design = sw->add_option("--design", wo.design, "design JSON file");
    sw->add_flag("--plan", wo.use_plan, "synthesize the design first")->excludes(sw_design);
    sw->add_option("--param", wo.param, "sigma_theta | map_noise | start_angle")
        ->check(CLI::IsMember({"sigma_theta", "map_noise", "start_angle"}));
    sw->add_option("--range", wo.range, "grid range: LO HI (degrees or meters)")
        ->expected(2)
        ->required();
    sw->add_option("--steps", wo.steps, "number of grid points");
    sw->add_option("--trials", wo.trials, "Monte-Carlo trials per grid point");
    sw->add_option("--seed", wo.seed, "random seed");
    sw->add_option("--sigma-theta-deg", wo.sigma_theta_deg, "fixed turn noise, degrees");
    sw->add_option("--sigma-l-m", wo.sigma_l_m, "fixed length noise, meters");
    sw->add_option("--threads", wo.threads, "parallelism hint");
    sw->add_option("--out-csv", wo.out_csv, "output CSV");
    sw->add_option("--out-svg", wo.out_svg, "curve SVG");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(sim)) {
        if (*sim_angle_opt) so.start_angle_deg = sim_angle;
        return cmd_simulate(so);
    }
    if (app.got_subcommand(pl)) return cmd_plan(po);
    if (app.got_subcommand(ev)) return cmd_evaluate(eo);
    if (app.got_subcommand(sw)) {
        if (!wo.use_plan && wo.design.empty()) die(1, "sweep needs --design or --plan");
        return cmd_sweep(wo);
    }
    return 1;
}
