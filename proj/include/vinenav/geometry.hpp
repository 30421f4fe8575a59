#pragma once

// Planar geometry primitives for the navigation core: vectors, simple
// polygons used as obstacles, the world model, and the ray / distance
// queries the kinematic integrator is built on.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vinenav {

constexpr double kEpsGeom = 1e-9;  // coincidence tolerance, meters

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // z component of the 3-d cross product (this x o).
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    double angle() const { return std::atan2(y, x); }
    // counter-clockwise perpendicular.
    Vec2 perp() const { return {-y, x}; }

    Vec2 normalized() const {
        double n = norm();
        if (n < kEpsGeom) throw std::invalid_argument("cannot normalize near-zero vector");
        return {x / n, y / n};
    }

    Vec2 rotated(double ang) const {
        double c = std::cos(ang), s = std::sin(ang);
        return {c * x - s * y, s * x + c * y};
    }

    static Vec2 from_angle(double ang) { return {std::cos(ang), std::sin(ang)}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Signed angle that rotates unit-ish vector `from` onto `to`, in (-pi, pi].
double signed_angle(Vec2 from, Vec2 to);

// Distance from point p to segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Closest point on segment [a, b] to p.
Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b);

struct Rect {
    Vec2 min;
    Vec2 max;

    bool contains(Vec2 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const { return (max - min).norm(); }
};

// Simple polygon, vertices in counter-clockwise order. Used for obstacles.
struct Polygon {
    std::vector<Vec2> vertices;

    Polygon() = default;
    explicit Polygon(std::vector<Vec2> v) : vertices(std::move(v)) {}

    std::size_t size() const { return vertices.size(); }
    Vec2 vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
    // Edge i runs from vertex i to vertex i+1.
    std::pair<Vec2, Vec2> edge(std::size_t i) const {
        return {vertex(i), vertex(i + 1)};
    }

    double area() const;  // signed; positive for counter-clockwise winding

    // Throws std::invalid_argument when the polygon has fewer than three
    // vertices, repeated/collinear-degenerate vertices, self-intersections,
    // or clockwise winding.
    void validate() const;

    bool contains(Vec2 p) const;          // strict interior (boundary counts as inside)
    double distance_to_boundary(Vec2 p) const;
    // Negative inside, positive outside, ~0 on the boundary.
    double signed_distance(Vec2 p) const;
};

struct MapModel {
    Rect bounds;
    std::vector<Polygon> obstacles;
    Vec2 start;
    // Fixed launch heading in radians; nullopt means the heading is free and
    // chosen by the planner.
    std::optional<double> start_angle;
    Vec2 goal;
    double success_radius = 0.05;

    // Throws std::invalid_argument on: invalid obstacle polygons, obstacles
    // overlapping each other or leaving the bounds, start/goal inside an
    // obstacle or outside the bounds, or non-positive success radius.
    void validate() const;
};

struct RayHit {
    double distance = 0.0;   // along the ray, meters
    Vec2 point;              // hit location
    std::size_t obstacle = 0;
    std::size_t edge = 0;    // edge index within the obstacle
    Vec2 tangent;            // unit vector along the hit edge (vertex order)
};

// First obstacle-boundary intersection of the ray origin + t*dir, t >= min_t.
// Bounds are not considered; a ray inside an empty map reports no hit.
// Throws std::invalid_argument for a near-zero direction.
std::optional<RayHit> ray_cast(Vec2 origin, Vec2 dir, const MapModel& map,
                               double min_t = kEpsGeom);

// Distance until the ray leaves the bounding rectangle (origin must be inside).
double ray_exit_distance(Vec2 origin, Vec2 dir, const Rect& bounds);

// Next polygon vertex along the boundary from a hit point, in the direction
// that best matches `heading` (used to find the corner a sliding tip runs
// toward). Returns the vertex index such that travel hit->vertex(i) follows
// the edge in the heading-aligned direction.
std::size_t next_boundary_vertex(const RayHit& hit, Vec2 heading, const MapModel& map);

bool point_in_any_obstacle(Vec2 p, const MapModel& map);

// Index of the obstacle whose boundary is nearest to p, with the distance.
std::optional<std::pair<std::size_t, double>> nearest_obstacle(Vec2 p, const MapModel& map);

// First crossing of segment [a, b] with any obstacle boundary, as a fraction
// tau in [0, 1] of the segment, ignoring crossings closer than min_t meters
// from a. Convenience wrapper over ray_cast for finite moves.
std::optional<RayHit> segment_hit(Vec2 a, Vec2 b, const MapModel& map,
                                  double min_t = kEpsGeom);

}  // namespace vinenav
