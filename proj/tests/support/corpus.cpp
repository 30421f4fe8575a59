#include "corpus.hpp"

#include <algorithm>
#include <cmath>

#include "reference.hpp"

namespace corpus {

using vinenav::MapModel;
using vinenav::Polygon;
using vinenav::RobotDesign;
using vinenav::Vec2;

namespace {

// xorshift64* — unrelated to the library's counter-based generator.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        return s * 0x2545f4914f6cdd1dULL;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((next() >> 11) * 0x1.0p-53);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

Polygon random_obstacle(Rng& rng) {
    Vec2 c{rng.uniform(0.8, 3.2), rng.uniform(0.8, 3.2)};
    double r = rng.uniform(0.25, 0.7);
    std::size_t k = 3 + rng.below(4);
    std::vector<double> angs(k);
    for (auto& a : angs) a = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(angs.begin(), angs.end());
    // Reject near-duplicate directions that would make sliver edges.
    for (std::size_t i = 1; i < k; ++i)
        if (angs[i] - angs[i - 1] < 0.3) return {};
    if (angs[0] + 2.0 * M_PI - angs.back() < 0.3) return {};
    Polygon poly;
    for (double a : angs)
        poly.vertices.push_back(c + Vec2::from_angle(a) * (r * rng.uniform(0.7, 1.0)));
    return poly;
}

bool far_from_obstacles(Vec2 p, const MapModel& map, double margin) {
    if (vinenav::point_in_any_obstacle(p, map)) return false;
    for (const auto& poly : map.obstacles)
        if (poly.distance_to_boundary(p) < margin) return false;
    return true;
}

MapModel random_map(Rng& rng) {
    MapModel map;
    map.bounds = {{0.0, 0.0}, {4.0, 4.0}};
    std::size_t want = 1 + rng.below(3);
    for (std::size_t tries = 0; map.obstacles.size() < want && tries < 40; ++tries) {
        Polygon cand = random_obstacle(rng);
        if (cand.size() < 3) continue;
        map.obstacles.push_back(cand);
        try {
            MapModel probe = map;
            probe.start = {0.05, 0.05};
            probe.goal = {3.95, 3.95};
            probe.validate();
        } catch (const std::exception&) {
            map.obstacles.pop_back();
        }
    }
    for (int tries = 0; tries < 200; ++tries) {
        Vec2 s{rng.uniform(0.2, 3.8), rng.uniform(0.2, 3.8)};
        if (!far_from_obstacles(s, map, 0.15)) continue;
        map.start = s;
        break;
    }
    // Aim at a random obstacle boundary point (with angular slack) so the
    // sample actually exercises contact rather than mostly free flight.
    if (!map.obstacles.empty() && rng.below(10) < 8) {
        const Polygon& poly = map.obstacles[rng.below(map.obstacles.size())];
        auto [a, b] = poly.edge(rng.below(poly.size()));
        Vec2 at = a + (b - a) * rng.uniform(0.1, 0.9);
        map.start_angle = (at - map.start).angle() + rng.uniform(-0.3, 0.3);
    } else {
        map.start_angle = rng.uniform(-M_PI, M_PI);
    }
    for (int tries = 0; tries < 200; ++tries) {
        Vec2 g{rng.uniform(0.2, 3.8), rng.uniform(0.2, 3.8)};
        if (!far_from_obstacles(g, map, 0.15)) continue;
        map.goal = g;
        break;
    }
    map.success_radius = 0.05;
    return map;
}

RobotDesign random_design(Rng& rng) {
    RobotDesign d;
    std::size_t n = 1 + rng.below(4);
    for (std::size_t i = 0; i < n; ++i) {
        double turn = rng.below(10) < 3 ? 0.0 : rng.uniform(-M_PI / 2, M_PI / 2);
        d.segments.push_back({rng.uniform(0.3, 1.5), turn});
    }
    return d;
}

}  // namespace

std::vector<Pair> make_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<Pair> out;
    for (std::uint64_t id = 0; out.size() < count && id < count * 400; ++id) {
        Rng rng(seed * 0x100000001b3ULL + id + 1);
        MapModel map = random_map(rng);
        try {
            map.validate();
        } catch (const std::exception&) {
            continue;
        }
        RobotDesign design = random_design(rng);

        refsim::RefResult fine = refsim::ref_deploy(map, design, std::nullopt, 1e-4);
        if (fine.termination != "length-reached") continue;
        // Stay clear of the head-on classification boundary.
        if (fine.contact_episodes > 0 && fine.min_approach < 2e-3) continue;
        // Knife-edge outcomes flip with resolution; require self-consistency.
        refsim::RefResult coarse = refsim::ref_deploy(map, design, std::nullopt, 2e-4);
        if (coarse.termination != "length-reached") continue;
        if (dist(coarse.tip, fine.tip) > 5e-4) continue;

        Pair p;
        p.map = std::move(map);
        p.design = std::move(design);
        p.id = id;
        p.contact_episodes = fine.contact_episodes;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace corpus
