#include "vinenav/geometry.hpp"

#include <algorithm>
#include <limits>

namespace vinenav {

double signed_angle(Vec2 from, Vec2 to) {
    double a = std::atan2(from.cross(to), from.dot(to));
    // atan2 returns (-pi, pi]; keep -pi mapped to +pi for a stable convention.
    if (a <= -M_PI) a = M_PI;
    return a;
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 e = b - a;
    double len2 = e.norm2();
    if (len2 < kEpsGeom * kEpsGeom) return a;
    double t = std::clamp((p - a).dot(e) / len2, 0.0, 1.0);
    return a + e * t;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    return dist(p, closest_on_segment(p, a, b));
}

double Polygon::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        twice += vertex(i).cross(vertex(i + 1));
    return 0.5 * twice;
}

namespace {

// Proper or touching intersection test for segments [a,b] and [c,d],
// excluding shared endpoints when `skip_shared` is set (for adjacent edges).
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        double v = (q - p).cross(r - p);
        if (v > kEpsGeom) return 1;
        if (v < -kEpsGeom) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on = [](Vec2 p, Vec2 q, Vec2 r) {  // r collinear with pq and within its box
        return std::min(p.x, q.x) - kEpsGeom <= r.x && r.x <= std::max(p.x, q.x) + kEpsGeom &&
               std::min(p.y, q.y) - kEpsGeom <= r.y && r.y <= std::max(p.y, q.y) + kEpsGeom;
    };
    if (o1 == 0 && on(a, b, c)) return true;
    if (o2 == 0 && on(a, b, d)) return true;
    if (o3 == 0 && on(c, d, a)) return true;
    if (o4 == 0 && on(c, d, b)) return true;
    return false;
}

}  // namespace

void Polygon::validate() const {
    std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist(vertex(i), vertex(i + 1)) < 1e-7)
            throw std::invalid_argument("polygon has near-coincident consecutive vertices");
    }
    if (area() <= kEpsGeom)
        throw std::invalid_argument("polygon must have positive area and counter-clockwise winding");
    // Simplicity: non-adjacent edges must not touch at all.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            auto [a, b] = edge(i);
            auto [c, d] = edge(j);
            if (segments_intersect(a, b, c, d))
                throw std::invalid_argument("polygon is self-intersecting");
        }
    }
}

bool Polygon::contains(Vec2 p) const {
    if (distance_to_boundary(p) <= kEpsGeom) return true;
    bool inside = false;
    std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Vec2 a = vertices[j], b = vertices[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            double xcross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

double Polygon::distance_to_boundary(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        auto [a, b] = edge(i);
        best = std::min(best, segment_distance(p, a, b));
    }
    return best;
}

double Polygon::signed_distance(Vec2 p) const {
    double d = distance_to_boundary(p);
    return contains(p) ? -d : d;
}

void MapModel::validate() const {
    if (!(bounds.max.x - bounds.min.x > kEpsGeom) || !(bounds.max.y - bounds.min.y > kEpsGeom))
        throw std::invalid_argument("bounds rectangle is empty or inverted");
    if (!(success_radius > 0.0))
        throw std::invalid_argument("success radius must be positive");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        try {
            obstacles[i].validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("obstacles[" + std::to_string(i) + "]: " + e.what());
        }
        for (Vec2 v : obstacles[i].vertices) {
            if (!bounds.contains(v))
                throw std::invalid_argument("obstacles[" + std::to_string(i) + "] leaves the map bounds");
        }
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        for (std::size_t j = i + 1; j < obstacles.size(); ++j) {
            const Polygon& p = obstacles[i];
            const Polygon& q = obstacles[j];
            bool overlap = false;
            for (std::size_t e = 0; e < p.size() && !overlap; ++e)
                for (std::size_t f = 0; f < q.size() && !overlap; ++f) {
                    auto [a, b] = p.edge(e);
                    auto [c, d] = q.edge(f);
                    overlap = segments_intersect(a, b, c, d);
                }
            if (!overlap) overlap = q.contains(p.vertices[0]) || p.contains(q.vertices[0]);
            if (overlap)
                throw std::invalid_argument("obstacles[" + std::to_string(i) + "] and obstacles[" +
                                            std::to_string(j) + "] overlap");
        }
    }
    if (!bounds.contains(start)) throw std::invalid_argument("start lies outside the map bounds");
    if (!bounds.contains(goal)) throw std::invalid_argument("goal lies outside the map bounds");
    if (point_in_any_obstacle(start, *this)) throw std::invalid_argument("start lies inside an obstacle");
    if (point_in_any_obstacle(goal, *this)) throw std::invalid_argument("goal lies inside an obstacle");
}

std::optional<RayHit> ray_cast(Vec2 origin, Vec2 dir, const MapModel& map, double min_t) {
    double dn = dir.norm();
    if (dn < kEpsGeom) throw std::invalid_argument("ray direction must be non-zero");
    Vec2 d = dir / dn;

    std::optional<RayHit> best;
    for (std::size_t oi = 0; oi < map.obstacles.size(); ++oi) {
        const Polygon& poly = map.obstacles[oi];
        for (std::size_t ei = 0; ei < poly.size(); ++ei) {
            auto [a, b] = poly.edge(ei);
            Vec2 e = b - a;
            double denom = d.cross(e);
            if (std::abs(denom) < 1e-14) continue;  // parallel; grazing handled by contact logic
            Vec2 ao = a - origin;
            double t = ao.cross(e) / denom;
            double s = ao.cross(d) / denom;
            if (t < min_t) continue;
            if (s < -1e-12 || s > 1.0 + 1e-12) continue;
            if (!best || t < best->distance - 1e-12 ||
                (t < best->distance + 1e-12 &&
                 (oi < best->obstacle || (oi == best->obstacle && ei < best->edge)))) {
                RayHit h;
                h.distance = t;
                h.point = origin + d * t;
                h.obstacle = oi;
                h.edge = ei;
                h.tangent = e.normalized();
                best = h;
            }
        }
    }
    return best;
}

double ray_exit_distance(Vec2 origin, Vec2 dir, const Rect& bounds) {
    Vec2 d = dir.normalized();
    double t_exit = std::numeric_limits<double>::infinity();
    if (std::abs(d.x) > 1e-15) {
        double tx = (d.x > 0 ? bounds.max.x - origin.x : bounds.min.x - origin.x) / d.x;
        t_exit = std::min(t_exit, tx);
    }
    if (std::abs(d.y) > 1e-15) {
        double ty = (d.y > 0 ? bounds.max.y - origin.y : bounds.min.y - origin.y) / d.y;
        t_exit = std::min(t_exit, ty);
    }
    return std::max(t_exit, 0.0);
}

std::size_t next_boundary_vertex(const RayHit& hit, Vec2 heading, const MapModel& map) {
    const Polygon& poly = map.obstacles[hit.obstacle];
    double along = heading.dot(hit.tangent);
    if (std::abs(along) < 1e-12)
        throw std::domain_error("head-on contact: heading has no component along the edge");
    std::size_t n = poly.size();
    return along > 0 ? (hit.edge + 1) % n : hit.edge;
}

bool point_in_any_obstacle(Vec2 p, const MapModel& map) {
    for (const Polygon& poly : map.obstacles)
        if (poly.contains(p)) return true;
    return false;
}

std::optional<std::pair<std::size_t, double>> nearest_obstacle(Vec2 p, const MapModel& map) {
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t i = 0; i < map.obstacles.size(); ++i) {
        double d = map.obstacles[i].distance_to_boundary(p);
        if (!best || d < best->second) best = {{i, d}};
    }
    return best;
}

std::optional<RayHit> segment_hit(Vec2 a, Vec2 b, const MapModel& map, double min_t) {
    double len = dist(a, b);
    if (len < kEpsGeom) return std::nullopt;
    auto hit = ray_cast(a, (b - a) / len, map, min_t);
    if (hit && hit->distance <= len + 1e-12) return hit;
    return std::nullopt;
}

}  // namespace vinenav
