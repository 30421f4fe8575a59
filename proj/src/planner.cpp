#include "vinenav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "vinenav/deployment.hpp"

namespace vinenav {

WaypointSet build_waypoints(const MapModel& map, std::size_t interior_count, std::uint64_t seed,
                            double vertex_offset) {
    WaypointSet ws;
    Waypoint s;
    s.position = map.start;
    s.source = Waypoint::Source::start;
    ws.points.push_back(s);
    ws.start_index = 0;
    Waypoint g;
    g.position = map.goal;
    g.source = Waypoint::Source::goal;
    ws.points.push_back(g);
    ws.goal_index = 1;

    auto usable = [&](Vec2 p) {
        return map.bounds.contains(p) && !point_in_any_obstacle(p, map);
    };

    for (std::size_t oi = 0; oi < map.obstacles.size(); ++oi) {
        const Polygon& poly = map.obstacles[oi];
        std::size_t n = poly.size();
        for (std::size_t vi = 0; vi < n; ++vi) {
            Vec2 prev = poly.vertex(vi + n - 1);
            Vec2 v = poly.vertex(vi);
            Vec2 next = poly.vertex(vi + 1);
            Vec2 n1 = -((v - prev).normalized().perp());
            Vec2 n2 = -((next - v).normalized().perp());
            Vec2 bis = n1 + n2;
            if (bis.norm() < 1e-9) bis = n2;
            Vec2 p = v + bis.normalized() * vertex_offset;
            if (!usable(p)) continue;
            Waypoint w;
            w.position = p;
            w.source = Waypoint::Source::obstacle_vertex;
            w.obstacle = static_cast<int>(oi);
            w.vertex = static_cast<int>(vi);
            ws.points.push_back(w);
        }
    }

    CounterRng rng(seed);
    for (std::size_t i = 0; i < interior_count; ++i) {
        for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
            Vec2 p{rng.uniform(map.bounds.min.x, map.bounds.max.x, rng_stream::planner_interior, i,
                               2 * attempt),
                   rng.uniform(map.bounds.min.y, map.bounds.max.y, rng_stream::planner_interior, i,
                               2 * attempt + 1)};
            if (!usable(p)) continue;
            bool clear = true;
            for (const auto& poly : map.obstacles)
                if (poly.distance_to_boundary(p) < vertex_offset) {
                    clear = false;
                    break;
                }
            if (!clear) continue;
            Waypoint w;
            w.position = p;
            w.source = Waypoint::Source::interior;
            ws.points.push_back(w);
            break;
        }
    }
    return ws;
}

std::size_t WaypointGraph::angle_bin(double ang) const {
    double w = bin_width();
    double x = std::fmod(ang + M_PI, 2.0 * M_PI);
    if (x < 0.0) x += 2.0 * M_PI;
    std::size_t idx = static_cast<std::size_t>(x / w);
    return idx >= bins ? bins - 1 : idx;
}

WaypointGraph build_graph(const WaypointSet& wps, const MapModel& map, const GraphParams& p,
                          const ModelConfig& cfg) {
    WaypointGraph g;
    g.n_waypoints = wps.points.size();
    g.bins = p.bins;
    g.theta_max = p.theta_max;
    g.start_wp = wps.start_index;
    g.goal_wp = wps.goal_index;
    if (map.start_angle) {
        g.start_bins.push_back(g.angle_bin(*map.start_angle));
    } else {
        for (std::size_t b = 0; b < g.bins; ++b) g.start_bins.push_back(b);
    }

    double cap = p.probe_factor * map.bounds.diagonal();
    g.flow_out.assign(g.n_waypoints * g.bins, {});

    for (std::size_t w = 0; w < g.n_waypoints; ++w) {
        MapModel probe_map = map;
        probe_map.start = wps.points[w].position;
        probe_map.start_angle.reset();
        std::vector<std::size_t> targets;
        for (std::size_t t = 0; t < g.n_waypoints; ++t)
            if (t != w) targets.push_back(t);
        for (std::size_t b = 0; b < g.bins; ++b) {
            RobotDesign probe;
            probe.segments.push_back({cap, 0.0});
            Deployment dep(probe_map, probe, cfg, g.bin_angle(b));
            for (std::size_t t : targets)
                dep.add_watcher(wps.points[t].position, map.success_radius);
            dep.run();
            for (std::size_t k = 0; k < targets.size(); ++k) {
                const auto& pass = dep.pass(k);
                if (!pass) continue;
                FlowEdge e;
                e.from_wp = w;
                e.from_bin = b;
                e.to_wp = targets[k];
                e.to_bin = g.angle_bin(pass->heading.angle());
                e.arrive_length = pass->length;
                e.arrive_pos = pass->tip;
                e.arrive_angle = pass->heading.angle();
                g.flow_out[g.node(w, b)].push_back(g.flow.size());
                g.flow.push_back(e);
            }
        }
    }
    return g;
}

std::optional<PlanPath> min_turn_route(const WaypointGraph& g) {
    const std::size_t S = g.n_waypoints * g.bins;
    const std::size_t E = S + 1;
    const std::uint32_t INF = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> dist(E + 1, {INF, INF});
    std::vector<std::int64_t> parent(E + 1, -1);
    using QItem = std::tuple<std::uint32_t, std::uint32_t, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[S] = {0, 0};
    pq.push({0, 0, S});

    std::size_t turn_span = static_cast<std::size_t>(g.theta_max / g.bin_width() + 1e-9);

    auto relax = [&](std::size_t v, std::uint32_t wgt, std::uint32_t hops, std::size_t from) {
        if (std::make_pair(wgt, hops) < dist[v]) {
            dist[v] = {wgt, hops};
            parent[v] = static_cast<std::int64_t>(from);
            pq.push({wgt, hops, v});
        }
    };

    while (!pq.empty()) {
        auto [wgt, hops, u] = pq.top();
        pq.pop();
        if (std::make_pair(wgt, hops) != dist[u]) continue;
        if (u == E) break;
        if (u == S) {
            for (std::size_t b : g.start_bins) relax(g.node(g.start_wp, b), wgt, hops + 1, u);
            continue;
        }
        std::size_t wp = u / g.bins, bin = u % g.bins;
        if (wp == g.goal_wp) relax(E, wgt, hops + 1, u);
        for (std::size_t idx : g.flow_out[u]) {
            const FlowEdge& e = g.flow[idx];
            relax(g.node(e.to_wp, e.to_bin), wgt, hops + 1, u);
        }
        for (std::size_t db = 1; db <= turn_span; ++db) {
            relax(g.node(wp, (bin + db) % g.bins), wgt + 1, hops + 1, u);
            relax(g.node(wp, (bin + g.bins - db) % g.bins), wgt + 1, hops + 1, u);
        }
    }

    if (dist[E].first == INF) return std::nullopt;
    PlanPath path;
    path.turn_weight = dist[E].first;
    std::vector<std::size_t> chain;
    for (std::int64_t v = static_cast<std::int64_t>(E); v != -1; v = parent[v])
        chain.push_back(static_cast<std::size_t>(v));
    std::reverse(chain.begin(), chain.end());
    for (std::size_t v : chain) {
        if (v == S || v == E) continue;
        path.nodes.push_back({v / g.bins, v % g.bins});
    }
    for (const auto& [wp, bin] : path.nodes) {
        if (path.waypoints.empty() || path.waypoints.back() != wp) path.waypoints.push_back(wp);
    }
    return path;
}

// ---------------------------------------------------------------------------
// Greedy per-waypoint design synthesis

namespace {

constexpr std::uint64_t kPrefixTrialBase = 1ULL << 32;  // keeps planner draws off MC trial keys

struct Candidate {
    double turn;
    bool is_aim;  // launch aim: exempt from manufacturing noise
};

std::vector<Candidate> stage_candidates(bool first_stage_free_aim, double theta_max,
                                        double step) {
    std::vector<Candidate> out;
    if (first_stage_free_aim) {
        // Full-circle aim search, ordered by |angle| with positive first.
        std::size_t half = static_cast<std::size_t>(M_PI / step + 1e-9);
        out.push_back({0.0, true});
        for (std::size_t c = 1; c <= half; ++c) {
            out.push_back({c * step, true});
            if (c * step < M_PI - 1e-12) out.push_back({-(double)c * step, true});
        }
    } else {
        std::size_t k = static_cast<std::size_t>(theta_max / step + 1e-9);
        out.push_back({0.0, false});
        for (std::size_t c = 1; c <= k; ++c) {
            out.push_back({c * step, false});
            out.push_back({-(double)c * step, false});
        }
    }
    return out;
}

}  // namespace

RobotDesign route_design(const MapModel& map, const std::vector<Vec2>& targets,
                         const PlanParams& p, const ModelConfig& cfg,
                         std::vector<StageReport>* reports) {
    if (targets.empty()) throw std::invalid_argument("route needs at least one target");
    const bool free_start = !map.start_angle.has_value();
    const double d = map.success_radius;
    const double cap = p.graph.probe_factor * map.bounds.diagonal();
    const CounterRng rng(p.seed);
    const UncertaintyModel& u = p.uncertainty;

    RobotDesign committed;
    double committed_total = 0.0;

    for (std::size_t stage = 0; stage < targets.size(); ++stage) {
        Vec2 prev_target = stage == 0 ? map.start : targets[stage - 1];
        Vec2 target = targets[stage];

        // Realize the committed prefix. With no committed noise sources the
        // prefix is deterministic and a single representative suffices.
        bool deterministic_prefix =
            committed.segments.empty() || (u.sigma_length <= 0.0 && u.sigma_turn <= 0.0);
        std::vector<Deployment> bases;
        std::vector<std::uint64_t> base_ids;
        std::size_t realized = deterministic_prefix ? 1 : p.particles;
        for (std::uint64_t t = 0; t < realized; ++t) {
            std::uint64_t key = kPrefixTrialBase * (stage + 1) + t;
            RobotDesign prefix = sample_design(committed, u, rng, key, free_start);
            Deployment dep(map, prefix, cfg);
            dep.run();
            if (!committed.segments.empty()) {
                if (dep.termination() != TerminationReason::length_reached) continue;
                if (dist(dep.state().tip, prev_target) >= d) continue;
            }
            bases.push_back(std::move(dep));
            base_ids.push_back(t);
        }
        if (bases.empty())
            throw PlanError(PlanError::Code::depleted_particles,
                            "no prefix realization reaches waypoint " + std::to_string(stage) +
                                " within the success radius");

        auto cands = stage_candidates(free_start && stage == 0 && committed.segments.empty(),
                                      p.graph.theta_max, p.turn_step);
        double best_score = -1.0;
        double best_turn = 0.0;
        double best_len_sum = 0.0;
        std::size_t best_succ = 0;

        for (const Candidate& cand : cands) {
            bool sampled = !cand.is_aim && cand.turn != 0.0 && u.sigma_turn > 0.0;
            std::size_t succ = 0, total = 0;
            double len_sum = 0.0;
            auto run_branch = [&](const Deployment& base, double turn_eff, std::size_t weight) {
                Deployment dep = base;
                double realized_prefix = dep.target_length();
                dep.append_segment({cap, turn_eff});
                std::size_t wid = dep.add_watcher(target, d);
                dep.stop_when_all_watchers_pass(true);
                dep.run();
                total += weight;
                if (dep.pass(wid)) {
                    succ += weight;
                    len_sum += weight * (dep.pass(wid)->length - realized_prefix);
                }
            };
            if (!sampled && deterministic_prefix) {
                run_branch(bases[0], cand.turn, p.particles);
            } else if (deterministic_prefix) {
                for (std::uint64_t t = 0; t < p.particles; ++t) {
                    double eps = rng.uniform(-u.sigma_turn, u.sigma_turn,
                                             rng_stream::planner_candidate,
                                             kPrefixTrialBase * (stage + 1) + t, 0);
                    run_branch(bases[0], cand.turn + eps, 1);
                }
            } else {
                for (std::size_t i = 0; i < bases.size(); ++i) {
                    double turn_eff = cand.turn;
                    if (sampled)
                        turn_eff += rng.uniform(-u.sigma_turn, u.sigma_turn,
                                                rng_stream::planner_candidate,
                                                kPrefixTrialBase * (stage + 1) + base_ids[i], 0);
                    run_branch(bases[i], turn_eff, 1);
                }
            }
            double score = total ? static_cast<double>(succ) / total : 0.0;
            if (score > best_score + 1e-12) {  // candidate order encodes tie preference
                best_score = score;
                best_turn = cand.turn;
                best_len_sum = len_sum;
                best_succ = succ;
            }
        }

        if (best_succ == 0)
            throw PlanError(PlanError::Code::infeasible_waypoint,
                            "no candidate turn reaches waypoint " + std::to_string(stage + 1));

        double l_new = best_len_sum / best_succ;
        if (l_new < 1e-4) l_new = 1e-4;
        committed.segments.push_back({l_new, best_turn});
        committed_total += l_new;

        if (reports) {
            StageReport r;
            r.waypoint = stage;
            r.turn = best_turn;
            r.length = l_new;
            r.success = best_score;
            r.survivors = bases.size() == 1 ? p.particles : bases.size();
            reports->push_back(r);
        }
    }
    return committed;
}

PlanResult plan(const MapModel& map, const PlanParams& p, const ModelConfig& cfg) {
    PlanResult res;
    WaypointSet wps = build_waypoints(map, p.interior_waypoints, p.seed);
    WaypointGraph graph = build_graph(wps, map, p.graph, cfg);
    auto route = min_turn_route(graph);
    if (!route)
        throw PlanError(PlanError::Code::unreachable,
                        "goal unreachable: no waypoint route under the turn limit");
    res.route = *route;
    res.route_positions.push_back(map.start);

    std::vector<Vec2> targets;
    for (std::size_t i = 0; i < route->waypoints.size(); ++i) {
        if (i == 0 && route->waypoints[i] == wps.start_index) continue;
        targets.push_back(wps.points[route->waypoints[i]].position);
        res.route_positions.push_back(targets.back());
    }
    if (targets.empty()) {
        targets.push_back(map.goal);
        res.route_positions.push_back(map.goal);
    }

    res.design = route_design(map, targets, p, cfg, &res.stages);
    res.initial_heading = map.start_angle ? *map.start_angle
                                          : (res.design.segments.empty() ? 0.0
                                                                         : res.design.segments[0].turn);
    res.estimate = mc_success(map, res.design, p.uncertainty, p.eval_trials, p.seed, 0.0, cfg);
    return res;
}

}  // namespace vinenav
