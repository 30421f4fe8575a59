#include "vinenav/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace vinenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;
constexpr double kTouchTol = 1e-9;    // body/obstacle distance treated as contact
constexpr double kActiveTol = 1e-8;   // pre-existing proximity excluded from sweep checks
constexpr double kStraightTol = 1e-6; // bend below this counts as straight, radians

Vec2 outward_normal(const Polygon& poly, std::size_t edge) {
    auto [a, b] = poly.edge(edge);
    // Counter-clockwise winding keeps the interior on the left of each edge.
    return -((b - a).normalized().perp());
}

double seg_seg_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != o2 && o3 != o4) return 0.0;
    return std::min(std::min(segment_distance(c, a, b), segment_distance(d, a, b)),
                    std::min(segment_distance(a, c, d), segment_distance(b, c, d)));
}

double poly_segment_clearance(const Polygon& poly, Vec2 a, Vec2 b) {
    double best = kInf;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto [c, d] = poly.edge(i);
        best = std::min(best, seg_seg_distance(a, b, c, d));
    }
    return best;
}

}  // namespace

const char* to_string(EventType t) {
    switch (t) {
        case EventType::free_growth: return "free-growth";
        case EventType::turn_everted: return "turn-everted";
        case EventType::contact_start: return "contact-start";
        case EventType::slide: return "slide";
        case EventType::contact_end: return "contact-end";
        case EventType::pivot_removed: return "pivot-removed";
        case EventType::terminated: return "terminated";
    }
    return "?";
}

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::length_reached: return "length-reached";
        case TerminationReason::out_of_bounds: return "out-of-bounds";
        case TerminationReason::degenerate_contact: return "degenerate-contact";
        case TerminationReason::wedged: return "wedged";
        case TerminationReason::trapped: return "trapped";
    }
    return "?";
}

// Closed-form geometry of one slide leg: the distal chain rotates about the
// pivot A while the tip tracks the edge point T0 + s*dir. Growth fixes the
// free length l(s) of the last segment, and phi(s) is the chain rotation.
struct Deployment::SlideCtx {
    Vec2 A;
    std::size_t pivot_index = 0;
    Vec2 B0;      // last interior pivot relative to A at leg start
    Vec2 e0;      // heading at leg start
    double l0 = 0.0;
    double beta = 0.0;
    double B0n2 = 0.0;
    double L0 = 0.0;
    Vec2 T0;
    Vec2 dir;
    double q0 = 0.0;
    double m = 0.0;
    bool grazing = false;
    RotationSense sense = RotationSense::left;

    double q(double s) const { return q0 + (2.0 * m + s) * s; }
    double l(double s) const {
        if (grazing) return l0 + s;
        return -beta + std::sqrt(std::max(beta * beta - B0n2 + q(s), 0.0));
    }
    double length(double s) const { return L0 + l(s) - l0; }
    Vec2 tip(double s) const { return T0 + dir * s; }
    double phi(double s) const {
        if (grazing || s == 0.0) return 0.0;
        return signed_angle(B0 + e0 * l(s), tip(s) - A);
    }
    Vec2 heading(double s) const { return grazing ? e0 : e0.rotated(phi(s)); }
    double s_for_length(double Lt) const {
        double lt = l0 + (Lt - L0);
        if (grazing) return Lt - L0;
        double qt = lt * lt + 2.0 * beta * lt + B0n2;
        double disc = m * m - q0 + qt;
        if (disc < 0.0) return kInf;
        return -m + std::sqrt(disc);
    }
    double dphi_ds(double s) const {
        if (grazing) return 0.0;
        Vec2 W = tip(s) - A;
        double ls = l(s);
        double lp = (m + s) / std::max(ls + beta, 1e-12);
        Vec2 V = B0 + e0 * ls;
        return W.cross(dir) / std::max(W.norm2(), 1e-18) -
               V.cross(e0) * lp / std::max(V.norm2(), 1e-18);
    }
};

Deployment::Deployment(const MapModel& map, RobotDesign design, ModelConfig cfg,
                       std::optional<double> start_angle_override)
    : map_(&map), design_(std::move(design)), cfg_(cfg) {
    // An empty design is a valid zero-length program (segments can be
    // appended while deploying); validate only what is present.
    if (!design_.segments.empty()) design_.validate();
    double heading = map.start_angle ? *map.start_angle
                                     : (start_angle_override ? *start_angle_override : 0.0);
    PivotPoint base;
    base.position = map.start;
    base.kind = PivotKind::base;
    base.handedness = Handedness::both;
    state_.pivots.push_back(base);
    state_.tip = map.start;
    state_.heading = Vec2::from_angle(heading);

    double cum = 0.0;
    for (std::size_t i = 0; i < design_.segments.size(); ++i) {
        if (design_.segments[i].turn != 0.0) everts_.push_back({cum, design_.segments[i].turn});
        cum += design_.segments[i].length;
    }
    target_ = cum;
    trace_.tip_path.push_back(state_.tip);
    trace_.tip_path_length.push_back(0.0);
}

bool Deployment::finished() const { return trace_.termination.has_value(); }

void Deployment::terminate(TerminationReason r) {
    TraceEvent e;
    e.type = EventType::terminated;
    e.length = grown_;
    e.reason = r;
    trace_.events.push_back(e);
    trace_.termination = r;
    finalize_watchers();
}

void Deployment::run() {
    while (step()) {
    }
}

bool Deployment::step() {
    if (trace_.termination) return false;
    if (stop_on_passes_ && !watchers_.empty() && all_watchers_passed()) return false;
    if (trace_.events.size() > 1000000) {
        terminate(TerminationReason::trapped);
        return false;
    }
    if (contact_)
        slide_step();
    else
        free_step();
    if (trace_.termination) return false;
    if (stop_on_passes_ && !watchers_.empty() && all_watchers_passed()) return false;
    return true;
}

void Deployment::append_segment(DesignSegment seg) {
    if (!(seg.length > 0.0)) throw std::invalid_argument("appended segment length must be positive");
    if (trace_.termination) {
        if (*trace_.termination != TerminationReason::length_reached) return;  // dead deployment
        trace_.termination.reset();
        if (!trace_.events.empty() && trace_.events.back().type == EventType::terminated)
            trace_.events.pop_back();
    }
    if (seg.turn != 0.0) everts_.push_back({target_, seg.turn});
    design_.segments.push_back(seg);
    target_ += seg.length;
}

// ---------------------------------------------------------------------------
// Watchers

std::size_t Deployment::add_watcher(Vec2 center, double radius) {
    Watcher w;
    w.center = center;
    w.radius = radius;
    w.armed = dist(state_.tip, center) >= radius;
    w.recording = false;
    w.best.distance = kInf;
    watchers_.push_back(w);
    return watchers_.size() - 1;
}

const std::optional<PassRecord>& Deployment::pass(std::size_t watcher) const {
    return watchers_.at(watcher).result;
}

bool Deployment::all_watchers_passed() const {
    for (const auto& w : watchers_)
        if (!w.result) return false;
    return true;
}

template <typename LengthAt, typename HeadingAt>
void Deployment::watch_segment(Vec2 a, Vec2 b, LengthAt&& length_at, HeadingAt&& heading_at) {
    Vec2 d = b - a;
    double dn2 = d.norm2();
    if (dn2 < kTieTol * kTieTol) return;
    for (auto& w : watchers_) {
        if (w.result) continue;
        Vec2 p = a - w.center;
        // |p + t d|^2 - r^2, roots bound the inside-interval on this segment
        double A = dn2, B = 2.0 * p.dot(d), C = p.norm2() - w.radius * w.radius;
        double disc = B * B - 4.0 * A * C;
        double t1 = kInf, t2 = -kInf;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            t1 = (-B - sq) / (2.0 * A);
            t2 = (-B + sq) / (2.0 * A);
        }
        bool starts_inside = C < 0.0;
        if (!w.armed) {
            if (!starts_inside) {
                w.armed = true;
            } else if (t2 <= 1.0) {
                w.armed = true;  // leaves the disc at t2; cannot re-enter on the same segment
                continue;
            } else {
                continue;  // still inside the launch disc
            }
        }
        double lo, hi;  // inside-interval on [0,1]
        if (w.recording) {
            lo = 0.0;
            hi = std::min(t2 >= 0.0 ? t2 : kInf, 1.0);
        } else {
            if (disc < 0.0 || t2 <= 0.0 || t1 >= 1.0) continue;  // no entry here
            lo = std::max(t1, 0.0);
            hi = std::min(t2, 1.0);
            w.recording = true;
        }
        double tstar = std::clamp(-p.dot(d) / dn2, lo, hi);
        double dd = (p + d * tstar).norm();
        if (dd < w.best.distance) {
            w.best.distance = dd;
            w.best.length = length_at(tstar);
            w.best.tip = a + d * tstar;
            w.best.heading = heading_at(tstar);
        }
        if (t2 <= 1.0) {  // episode ends: first pass complete
            w.result = w.best;
            w.recording = false;
        }
    }
}

void Deployment::finalize_watchers() {
    for (auto& w : watchers_)
        if (!w.result && w.recording) w.result = w.best;
}

// ---------------------------------------------------------------------------
// Trace helpers

void Deployment::record_free_move(Vec2 from, Vec2 to, double len_from) {
    double step_len = dist(from, to);
    TraceEvent e;
    e.type = EventType::free_growth;
    e.length = len_from + step_len;
    e.from = from;
    e.to = to;
    trace_.events.push_back(e);
    trace_.tip_path.push_back(to);
    trace_.tip_path_length.push_back(e.length);
    Vec2 h = state_.heading;
    watch_segment(from, to, [&](double t) { return len_from + t * step_len; },
                  [&](double) { return h; });
}

void Deployment::record_slide_move(const SlideCtx& ctx, double s_end, std::size_t pivot) {
    TraceEvent e;
    e.type = EventType::slide;
    e.length = ctx.length(s_end);
    e.from = ctx.T0;
    e.to = ctx.tip(s_end);
    e.pivot = static_cast<int>(pivot);
    e.obstacle = contact_ ? static_cast<int>(contact_->obstacle) : -1;
    e.angle = ctx.phi(s_end);
    trace_.events.push_back(e);
    trace_.tip_path.push_back(e.to);
    trace_.tip_path_length.push_back(e.length);
    watch_segment(e.from, e.to, [&](double t) { return ctx.length(t * s_end); },
                  [&](double t) { return ctx.heading(t * s_end); });
}

// ---------------------------------------------------------------------------
// Pivot bookkeeping

void Deployment::update_touching() {
    for (auto& p : state_.pivots) {
        if (!p.touching || p.obstacle < 0) continue;
        double sd = map_->obstacles[p.obstacle].signed_distance(p.position);
        if (sd > cfg_.eps_release) p.touching = false;
    }
}

void Deployment::remove_straight_pivots(int keep) {
    for (std::size_t i = 1; i < state_.pivots.size();) {
        const PivotPoint& p = state_.pivots[i];
        if (static_cast<int>(i) != keep && p.kind == PivotKind::contact && !p.touching &&
            std::abs(state_.joint_angle(i)) < kStraightTol) {
            TraceEvent e;
            e.type = EventType::pivot_removed;
            e.length = grown_;
            e.pivot = static_cast<int>(i);
            trace_.events.push_back(e);
            state_.pivots.erase(state_.pivots.begin() + i);
            if (keep > static_cast<int>(i)) --keep;
        } else {
            ++i;
        }
    }
}

void Deployment::add_contact_pivot_at_tip(int obstacle, Vec2 old_edge_normal) {
    for (auto& p : state_.pivots)
        if (p.kind == PivotKind::contact && p.touching && p.obstacle == obstacle)
            p.touching = false;  // the new bend is the distal contact with this obstacle
    Vec2 V = state_.tip;
    PivotPoint& last = state_.pivots.back();
    if (dist(last.position, V) < cfg_.eps_geom) {
        last.touching = true;
        last.obstacle = obstacle;
        return;
    }
    Vec2 b = (V - last.position).normalized();
    Vec2 into = -old_edge_normal;
    PivotPoint p;
    p.position = V;
    p.kind = PivotKind::contact;
    p.handedness = b.cross(into) > 0 ? Handedness::left : Handedness::right;
    p.obstacle = obstacle;
    p.touching = true;
    state_.pivots.push_back(p);
}

// ---------------------------------------------------------------------------
// Eversion

void Deployment::process_eversion(bool in_contact) {
    auto [pos, turn] = everts_[next_evert_++];
    (void)pos;
    int new_pivot = -1;
    if (dist(state_.tip, state_.pivots.back().position) >= cfg_.eps_geom) {
        PivotPoint p;
        p.position = state_.tip;
        p.kind = PivotKind::designed_turn;
        p.handedness = turn > 0 ? Handedness::left : Handedness::right;
        if (in_contact) {
            p.obstacle = static_cast<int>(contact_->obstacle);
            p.touching = true;  // the bend is formed resting on the wall
        }
        state_.pivots.push_back(p);
        new_pivot = static_cast<int>(state_.pivots.size()) - 1;
    }
    state_.heading = state_.heading.rotated(turn);
    TraceEvent e;
    e.type = EventType::turn_everted;
    e.length = grown_;
    e.angle = turn;
    e.pivot = new_pivot;
    trace_.events.push_back(e);

    if (in_contact) {
        visited_.clear();  // the bend changes the geometry; allow revisiting edges
        Vec2 n = outward_normal(map_->obstacles[contact_->obstacle], contact_->edge);
        if (state_.heading.dot(n) > 1e-12) {
            TraceEvent ce;
            ce.type = EventType::contact_end;
            ce.length = grown_;
            ce.obstacle = static_cast<int>(contact_->obstacle);
            trace_.events.push_back(ce);
            contact_.reset();
            episode_begins_ = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Free growth

namespace {

struct BoundaryTouch {
    std::size_t obstacle = 0;
    std::size_t edge = 0;
    bool degenerate = false;
    bool wedged = false;
};

// When the tip rests on an obstacle boundary and the heading points into the
// surface, growth becomes a slide immediately; ray casting cannot see this
// (the intersection is at distance zero).
std::optional<BoundaryTouch> boundary_touch(Vec2 tip, Vec2 heading, const MapModel& map,
                                            double eps_perp) {
    std::optional<BoundaryTouch> best;
    double best_align = -1.0;  // admit along == 0: exact head-on is degenerate, not wedged
    bool near_boundary = false;
    for (std::size_t oi = 0; oi < map.obstacles.size(); ++oi) {
        const Polygon& poly = map.obstacles[oi];
        if (poly.distance_to_boundary(tip) > kActiveTol) continue;
        near_boundary = true;
        for (std::size_t ei = 0; ei < poly.size(); ++ei) {
            auto [a, b] = poly.edge(ei);
            if (segment_distance(tip, a, b) > kActiveTol) continue;
            Vec2 t = (b - a).normalized();
            Vec2 n = -t.perp();
            if (heading.dot(n) >= -1e-12) continue;  // not pressing into this face
            double along = heading.dot(t);
            Vec2 dirv = along >= 0 ? t : -t;
            Vec2 far = along >= 0 ? b : a;
            if ((far - tip).dot(dirv) < kTouchTol) continue;  // no room to slide on this edge
            if (std::abs(along) > best_align) {
                best_align = std::abs(along);
                best = BoundaryTouch{oi, ei, std::abs(along) < eps_perp, false};
            }
        }
    }
    if (!best && near_boundary) {
        // No slidable face. Wedged only if growth actually enters a solid
        // (a corner touch with the heading escaping into free space is not).
        for (const Polygon& poly : map.obstacles) {
            if (poly.distance_to_boundary(tip) > kActiveTol) continue;
            if (poly.signed_distance(tip + heading * 1e-5) < -1e-10) {
                BoundaryTouch w;
                w.wedged = true;
                return w;
            }
        }
    }
    return best;
}

}  // namespace

void Deployment::free_step() {
    // Immediate re-contact when resting on a boundary and pressing into it.
    if (auto bt = boundary_touch(state_.tip, state_.heading, *map_, cfg_.eps_perp)) {
        if (bt->wedged) {
            terminate(TerminationReason::wedged);
            return;
        }
        if (bt->degenerate) {
            terminate(TerminationReason::degenerate_contact);
            return;
        }
        TraceEvent e;
        e.type = EventType::contact_start;
        e.length = grown_;
        e.obstacle = static_cast<int>(bt->obstacle);
        trace_.events.push_back(e);
        contact_ = TipContact{bt->obstacle, bt->edge};
        visited_.clear();
        episode_begins_ = 0;
        return;
    }

    enum Kind { kEvert = 0, kEnd = 1, kHit = 2, kBounds = 3 };
    double best_d = target_ - grown_;
    int best_kind = kEnd;
    auto consider = [&](double d, int kind) {
        if (d < best_d - kTieTol || (d < best_d + kTieTol && kind < best_kind)) {
            best_d = std::max(d, 0.0);
            best_kind = kind;
        }
    };
    if (next_evert_ < everts_.size()) consider(everts_[next_evert_].first - grown_, kEvert);
    auto hit = ray_cast(state_.tip, state_.heading, *map_, cfg_.eps_geom);
    if (hit) consider(hit->distance, kHit);
    consider(ray_exit_distance(state_.tip, state_.heading, map_->bounds), kBounds);

    Vec2 from = state_.tip;
    Vec2 to = best_kind == kHit ? hit->point : state_.tip + state_.heading * best_d;
    if (best_d > cfg_.eps_geom) {
        state_.tip = to;
        double len_from = grown_;
        grown_ += best_d;
        record_free_move(from, to, len_from);
    } else {
        state_.tip = to;
    }

    switch (best_kind) {
        case kEvert:
            process_eversion(false);
            return;
        case kEnd:
            terminate(TerminationReason::length_reached);
            return;
        case kHit: {
            // Re-classify at the hit point: a ray through a corner may graze
            // past it, press a different face than the raw hit edge, or wedge.
            auto bt = boundary_touch(state_.tip, state_.heading, *map_, cfg_.eps_perp);
            if (!bt) return;  // graze: keep growing next step
            if (bt->wedged) {
                terminate(TerminationReason::wedged);
                return;
            }
            if (bt->degenerate) {
                terminate(TerminationReason::degenerate_contact);
                return;
            }
            TraceEvent e;
            e.type = EventType::contact_start;
            e.length = grown_;
            e.obstacle = static_cast<int>(bt->obstacle);
            trace_.events.push_back(e);
            contact_ = TipContact{bt->obstacle, bt->edge};
            visited_.clear();
            episode_begins_ = 0;
            return;
        }
        case kBounds:
            terminate(TerminationReason::out_of_bounds);
            return;
    }
}

// ---------------------------------------------------------------------------
// Sliding

namespace {

struct SweepHit {
    double s = 0.0;
    std::size_t obstacle = 0;
    Vec2 body_point;
    std::size_t after_node = 0;  // backbone pivot index the touch lies after (or on)
    bool at_tip = false;
};

struct SweepScan {
    // Moving geometry: pivot positions strictly distal to the pivot rotate;
    // the last segment stretches to the sliding tip.
    const std::vector<PivotPoint>* pivots;
    std::size_t pidx;
    const Deployment::SlideCtx* ctx;
    const MapModel* map;
    double tip_trim;
    // Contact being slid along: the stretching segment ends ON this edge, so
    // clearance against it (and the faces meeting it) is owned by the corner,
    // release, and degeneracy events, not the sweep scan.
    std::size_t contact_obstacle = 0;
    std::size_t contact_edge = 0;
    mutable long evals = 0;

    struct Pair {
        std::size_t kind;  // 0 = rigid segment (node..node+1), 1 = stretching segment
        std::size_t node;  // proximal backbone node index of the segment
        std::size_t obstacle;
        bool active;
    };
    std::vector<Pair> pairs;
    double r_max = 0.0;

    void build() {
        std::size_t np = pivots->size();
        for (std::size_t i = pidx; i + 1 < np; ++i) {
            for (std::size_t oi = 0; oi < map->obstacles.size(); ++oi)
                pairs.push_back({0, i, oi, true});
        }
        for (std::size_t oi = 0; oi < map->obstacles.size(); ++oi)
            pairs.push_back({1, np - 1, oi, true});
        for (std::size_t i = pidx + 1; i < np; ++i)
            r_max = std::max(r_max, dist((*pivots)[i].position, ctx->A));
        r_max = std::max(r_max, std::sqrt(ctx->q0));  // tip radius grows with s; see lipschitz()
        for (auto& pr : pairs)
            if (pair_clearance(pr, 0.0) < kActiveTol) pr.active = false;
    }

    Vec2 node_at(std::size_t i, double ph) const {
        Vec2 p = (*pivots)[i].position;
        if (i <= pidx) return p;
        return ctx->A + (p - ctx->A).rotated(ph);
    }

    double pair_clearance(const Pair& pr, double s) const {
        double ph = ctx->phi(s);
        const Polygon& poly = map->obstacles[pr.obstacle];
        Vec2 a, b;
        if (pr.kind == 0) {
            a = node_at(pr.node, ph);
            b = node_at(pr.node + 1, ph);
        } else {
            a = node_at(pr.node, ph);
            Vec2 t = ctx->tip(s);
            double seg = dist(a, t);
            if (seg < kTouchTol) return kInf;
            b = t - (t - a) / seg * std::min(tip_trim, 0.5 * seg);
            if (pr.obstacle == contact_obstacle) {
                // The trimmed end still hugs the contact edge (~trim * sin of the
                // approach angle away), which would pin the minimum clearance just
                // above touch level for the whole leg and defeat pruning.
                double best = kInf;
                std::size_t n = poly.size();
                for (std::size_t ei = 0; ei < n; ++ei) {
                    if (ei == contact_edge || ei == (contact_edge + 1) % n ||
                        (ei + 1) % n == contact_edge)
                        continue;
                    auto [c, d] = poly.edge(ei);
                    best = std::min(best, seg_seg_distance(a, b, c, d));
                }
                return best;
            }
        }
        return poly_segment_clearance(poly, a, b);
    }

    double clearance(double s, const Pair** argmin = nullptr) const {
        ++evals;
        double best = kInf;
        for (const auto& pr : pairs) {
            if (!pr.active) continue;
            double c = pair_clearance(pr, s);
            if (c < best) {
                best = c;
                if (argmin) *argmin = &pr;
            }
        }
        return best;
    }

    double lipschitz(double sa, double sb, double s_hi) const {
        double m = std::max({std::abs(ctx->dphi_ds(sa)), std::abs(ctx->dphi_ds(0.5 * (sa + sb))),
                             std::abs(ctx->dphi_ds(sb))});
        double r = std::max(r_max, std::sqrt(ctx->q(s_hi)));
        return 2.0 * r * m + 1.5;  // +1.5 covers the translating tip endpoint
    }

    std::optional<double> first_touch(double sa, double sb, double fa, double fb, double s_hi,
                                      int depth) const {
        if (fa <= kTouchTol) return sa;
        if (evals > 200000) return std::nullopt;  // pathological geometry: give up on the scan
        double L = lipschitz(sa, sb, s_hi);
        if (0.5 * (fa + fb - L * (sb - sa)) > kTouchTol) return std::nullopt;
        if (sb - sa < 1e-10 || depth > 60) return fa <= 10 * kActiveTol ? std::optional<double>(sa) : std::nullopt;
        double sm = 0.5 * (sa + sb);
        double fm = clearance(sm);
        if (auto r = first_touch(sa, sm, fa, fm, s_hi, depth + 1)) return r;
        return first_touch(sm, sb, fm, fb, s_hi, depth + 1);
    }

    std::optional<SweepHit> run(double s_hi) {
        build();
        bool any = false;
        for (const auto& pr : pairs) any = any || pr.active;
        if (!any || s_hi <= 0.0) return std::nullopt;
        double f0 = clearance(0.0);
        double f1 = clearance(s_hi);
        auto s = first_touch(0.0, s_hi, f0, f1, s_hi, 0);
        if (!s) return std::nullopt;
        const Pair* pr = nullptr;
        clearance(*s, &pr);
        if (!pr) return std::nullopt;
        SweepHit hit;
        hit.s = *s;
        hit.obstacle = pr->obstacle;
        hit.after_node = pr->node;
        double ph = ctx->phi(*s);
        Vec2 a = node_at(pr->node, ph);
        Vec2 b = pr->kind == 0 ? node_at(pr->node + 1, ph) : ctx->tip(*s);
        const Polygon& poly = map->obstacles[pr->obstacle];
        // touch point: closest body point to the obstacle boundary
        double best = kInf;
        for (std::size_t ei = 0; ei < poly.size(); ++ei) {
            auto [c, d] = poly.edge(ei);
            for (Vec2 cand : {closest_on_segment(c, a, b), closest_on_segment(d, a, b)}) {
                double dd = segment_distance(cand, c, d);
                if (dd < best) {
                    best = dd;
                    hit.body_point = cand;
                }
            }
            for (Vec2 cand : {closest_on_segment(a, c, d), closest_on_segment(b, c, d)}) {
                // body endpoints against the edge
                double da = segment_distance(a, c, d), db = segment_distance(b, c, d);
                (void)cand;
                if (da < best) {
                    best = da;
                    hit.body_point = a;
                }
                if (db < best) {
                    best = db;
                    hit.body_point = b;
                }
            }
        }
        hit.at_tip = pr->kind == 1 && dist(hit.body_point, ctx->tip(*s)) < 1e-6 + tip_trim * 2;
        return hit;
    }
};

}  // namespace

void Deployment::handle_corner(const SlideCtx& ctx, double /*s_corner*/) {
    const std::size_t oi = contact_->obstacle;
    const Polygon& poly = map_->obstacles[oi];
    auto [ea, eb] = poly.edge(contact_->edge);
    bool forward = ctx.dir.dot(eb - ea) > 0;
    std::size_t nv = poly.size();
    std::size_t e2 = forward ? (contact_->edge + 1) % nv : (contact_->edge + nv - 1) % nv;
    Vec2 n2 = outward_normal(poly, e2);
    if (state_.heading.dot(n2) < -1e-12) {
        // The heading still presses into the adjacent face: keep sliding —
        // unless the admissible slide direction on that face points back past
        // this corner, in which case both faces block (concave apex).
        auto [a2, b2] = poly.edge(e2);
        int sign = state_.heading.dot(b2 - a2) >= 0 ? 1 : -1;
        Vec2 dirv2 = (b2 - a2).normalized() * sign;
        Vec2 far2 = sign > 0 ? b2 : a2;
        if ((far2 - state_.tip).dot(dirv2) < kTouchTol) {
            terminate(TerminationReason::wedged);
            return;
        }
        auto key = std::make_tuple(oi, e2, sign);
        if (std::count(visited_.begin(), visited_.end(), key) >= 1) {
            terminate(TerminationReason::trapped);
            return;
        }
        visited_.push_back(key);
        contact_->edge = e2;
        return;
    }
    // The tip leaves the obstacle at the corner, bending around it.
    add_contact_pivot_at_tip(static_cast<int>(oi), outward_normal(poly, contact_->edge));
    TraceEvent e;
    e.type = EventType::contact_end;
    e.length = grown_;
    e.obstacle = static_cast<int>(oi);
    e.pivot = static_cast<int>(state_.pivots.size()) - 1;
    trace_.events.push_back(e);
    contact_.reset();
    visited_.clear();
    episode_begins_ = 0;
}

void Deployment::slide_step() {
    if (++episode_begins_ > 10000) {
        terminate(TerminationReason::trapped);
        return;
    }
    const std::size_t oi = contact_->obstacle;
    const Polygon& poly = map_->obstacles[oi];
    auto [ea, eb] = poly.edge(contact_->edge);
    Vec2 t_raw = (eb - ea).normalized();
    double along = state_.heading.dot(t_raw);
    if (std::abs(along) < cfg_.eps_perp) {
        terminate(TerminationReason::degenerate_contact);
        return;
    }
    Vec2 d = along > 0 ? t_raw : -t_raw;

    SlideCtx ctx;
    ctx.e0 = state_.heading;
    ctx.T0 = state_.tip;
    ctx.dir = d;
    ctx.L0 = grown_;
    double crossz = state_.heading.cross(d);
    ctx.grazing = std::abs(crossz) < 1e-9;
    std::size_t pidx = 0;
    if (!ctx.grazing) {
        ctx.sense = crossz > 0 ? RotationSense::left : RotationSense::right;
        pidx = select_pivot(state_, ctx.sense, *map_, cfg_.policy, cfg_);
    }
    ctx.pivot_index = pidx;
    ctx.A = state_.pivots[pidx].position;
    ctx.B0 = state_.pivots.back().position - ctx.A;
    ctx.l0 = dist(state_.pivots.back().position, state_.tip);
    ctx.beta = ctx.B0.dot(ctx.e0);
    ctx.B0n2 = ctx.B0.norm2();
    ctx.q0 = (ctx.T0 - ctx.A).norm2();
    ctx.m = (ctx.T0 - ctx.A).dot(d);
    if (!ctx.grazing && (ctx.beta + ctx.l0 <= 1e-12 || ctx.m <= 1e-12)) {
        terminate(TerminationReason::wedged);
        return;
    }

    enum Kind { kEnd = 0, kEvert = 1, kSweep = 2, kRelease = 3, kViolate = 4, kCorner = 5 };
    Vec2 V = d.dot(eb - ea) > 0 ? eb : ea;
    double best_s = std::max((V - ctx.T0).dot(d), 0.0);
    int best_kind = kCorner;
    auto consider = [&](double s, int kind) {
        if (s < 0.0) return;
        if (s < best_s - kTieTol || (s < best_s + kTieTol && kind < best_kind)) {
            best_s = std::max(s, 0.0);
            best_kind = kind;
        }
    };
    consider(ctx.s_for_length(target_), kEnd);
    if (next_evert_ < everts_.size()) consider(ctx.s_for_length(everts_[next_evert_].first), kEvert);

    SweepHit sweep_hit;
    if (!ctx.grazing && best_s > 0.0) {
        // Touching pivots distal to the rotation pivot can release from (or be
        // driven into) their obstacle part-way through the leg.
        for (std::size_t j = pidx + 1; j < state_.pivots.size(); ++j) {
            const PivotPoint& pj = state_.pivots[j];
            if (!pj.touching || pj.obstacle < 0) continue;
            const Polygon& pj_poly = map_->obstacles[pj.obstacle];
            auto sd_at = [&](double s) {
                Vec2 pos = ctx.A + (pj.position - ctx.A).rotated(ctx.phi(s));
                return pj_poly.signed_distance(pos);
            };
            const int N = 24;
            double prev_s = 0.0, prev_sd = sd_at(0.0);
            for (int k = 1; k <= N; ++k) {
                double s = best_s * k / N;
                double sd = sd_at(s);
                int mode = 0;
                double thresh = 1.05 * cfg_.eps_release;
                if (prev_sd < thresh && sd >= thresh) mode = 1;       // release
                else if (prev_sd > -thresh && sd <= -thresh) mode = 2;  // driven in
                if (mode != 0) {
                    double lo = prev_s, hi = s;
                    for (int it = 0; it < 60; ++it) {
                        double mid = 0.5 * (lo + hi);
                        double v = sd_at(mid);
                        bool crossed = mode == 1 ? v >= thresh : v <= -thresh;
                        (crossed ? hi : lo) = mid;
                    }
                    consider(hi, mode == 1 ? kRelease : kViolate);
                    break;
                }
                prev_s = s;
                prev_sd = sd;
            }
        }
        SweepScan scan;
        scan.pivots = &state_.pivots;
        scan.pidx = pidx;
        scan.ctx = &ctx;
        scan.map = map_;
        scan.tip_trim = 1e-6;
        scan.contact_obstacle = contact_->obstacle;
        scan.contact_edge = contact_->edge;
        if (auto h = scan.run(best_s)) {
            sweep_hit = *h;
            consider(h->s, kSweep);
        }
    }

    // Apply the leg up to the first event.
    if (!ctx.grazing && best_s > 0.0) {
        double ph = ctx.phi(best_s);
        for (std::size_t i = pidx + 1; i < state_.pivots.size(); ++i)
            state_.pivots[i].position = ctx.A + (state_.pivots[i].position - ctx.A).rotated(ph);
    }
    Vec2 new_tip = ctx.tip(best_s);
    double new_len = ctx.length(best_s);
    state_.heading = ctx.heading(best_s);
    if (best_s > cfg_.eps_geom) record_slide_move(ctx, best_s, pidx);
    state_.tip = new_tip;
    grown_ = new_len;

    update_touching();
    remove_straight_pivots(static_cast<int>(pidx));

    switch (best_kind) {
        case kEnd:
            terminate(TerminationReason::length_reached);
            return;
        case kEvert:
            process_eversion(true);
            return;
        case kCorner:
            handle_corner(ctx, best_s);
            return;
        case kRelease:
            return;  // touching flags already updated; next leg re-selects the pivot
        case kViolate:
            terminate(TerminationReason::wedged);
            return;
        case kSweep:
            break;
    }

    // Body sweep contact.
    const SweepHit& h = sweep_hit;
    if (h.obstacle == oi) {
        // Folding onto the obstacle being slid along leaves no consistent
        // contact assignment; treat as a wedge.
        terminate(TerminationReason::wedged);
        return;
    }
    const Polygon& poly2 = map_->obstacles[h.obstacle];
    if (h.at_tip) {
        // The sliding tip ran into a second obstacle: bend around the old
        // contact and continue sliding on the new wall.
        std::size_t e2 = 0;
        double bd = kInf;
        for (std::size_t ei = 0; ei < poly2.size(); ++ei) {
            auto [c2, d2] = poly2.edge(ei);
            double dd = segment_distance(state_.tip, c2, d2);
            if (dd < bd) {
                bd = dd;
                e2 = ei;
            }
        }
        auto [c2, d2] = poly2.edge(e2);
        Vec2 t2 = (d2 - c2).normalized();
        if (std::abs(state_.heading.dot(t2)) < cfg_.eps_perp) {
            terminate(TerminationReason::degenerate_contact);
            return;
        }
        Vec2 d2v = state_.heading.dot(t2) > 0 ? t2 : -t2;
        Vec2 n_old = outward_normal(poly, contact_->edge);
        if (d2v.dot(n_old) < -1e-9) {
            terminate(TerminationReason::wedged);
            return;
        }
        add_contact_pivot_at_tip(static_cast<int>(oi), n_old);
        TraceEvent ce;
        ce.type = EventType::contact_end;
        ce.length = grown_;
        ce.obstacle = static_cast<int>(oi);
        ce.pivot = static_cast<int>(state_.pivots.size()) - 1;
        trace_.events.push_back(ce);
        TraceEvent cs;
        cs.type = EventType::contact_start;
        cs.length = grown_;
        cs.obstacle = static_cast<int>(h.obstacle);
        trace_.events.push_back(cs);
        contact_ = TipContact{h.obstacle, e2};
        visited_.clear();
        episode_begins_ = 0;
        return;
    }
    // Brace: a body point comes to rest on another obstacle.
    for (auto& p : state_.pivots)
        if (p.kind == PivotKind::contact && p.touching && p.obstacle == static_cast<int>(h.obstacle))
            p.touching = false;
    std::size_t e2 = 0;
    double bd = kInf;
    for (std::size_t ei = 0; ei < poly2.size(); ++ei) {
        auto [c2, d2] = poly2.edge(ei);
        double dd = segment_distance(h.body_point, c2, d2);
        if (dd < bd) {
            bd = dd;
            e2 = ei;
        }
    }
    Vec2 into = -outward_normal(poly2, e2);
    // Re-touch of an existing bend, or a fresh pivot splitting a segment.
    bool retouched = false;
    for (std::size_t j = 0; j < state_.pivots.size(); ++j) {
        if (dist(state_.pivots[j].position, h.body_point) < 1e-7) {
            state_.pivots[j].touching = true;
            state_.pivots[j].obstacle = static_cast<int>(h.obstacle);
            if (state_.pivots[j].kind == PivotKind::contact && j > 0) {
                Vec2 b = (state_.pivots[j].position - state_.pivots[j - 1].position).normalized();
                state_.pivots[j].handedness = b.cross(into) > 0 ? Handedness::left : Handedness::right;
            }
            retouched = true;
            break;
        }
    }
    if (!retouched) {
        // Locate the backbone segment holding the brace point; pivot indices
        // recorded during the scan may have shifted when straight pivots were
        // removed above, so recompute from geometry.
        std::size_t after = 0;
        double seg_bd = kInf;
        for (std::size_t i = 0; i < state_.pivots.size(); ++i) {
            Vec2 a = state_.pivots[i].position;
            Vec2 b = i + 1 < state_.pivots.size() ? state_.pivots[i + 1].position : state_.tip;
            double dd = segment_distance(h.body_point, a, b);
            if (dd < seg_bd) {
                seg_bd = dd;
                after = i;
            }
        }
        Vec2 seg_from = state_.pivots[after].position;
        Vec2 seg_to =
            after + 1 < state_.pivots.size() ? state_.pivots[after + 1].position : state_.tip;
        Vec2 b = (seg_to - seg_from).normalized();
        PivotPoint p;
        p.position = h.body_point;
        p.kind = PivotKind::contact;
        p.handedness = b.cross(into) > 0 ? Handedness::left : Handedness::right;
        p.obstacle = static_cast<int>(h.obstacle);
        p.touching = true;
        state_.pivots.insert(state_.pivots.begin() + after + 1, p);
    }
}

DeploymentTrace deploy(const MapModel& map, const RobotDesign& design, ModelConfig cfg,
                       std::optional<double> start_angle_override) {
    Deployment dep(map, design, cfg, start_angle_override);
    dep.run();
    return dep.trace();
}

}  // namespace vinenav
