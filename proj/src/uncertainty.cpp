#include "vinenav/uncertainty.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace vinenav {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const {
    std::uint64_t h = splitmix64(seed_ ^ 0x5851f42d4c957f2dULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ draw);
    return h;
}

double CounterRng::uniform01(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const {
    return (bits(stream, trial, draw) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi, std::uint64_t stream, std::uint64_t trial,
                           std::uint64_t draw) const {
    return lo + (hi - lo) * uniform01(stream, trial, draw);
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const {
    double u1 = uniform01(stream, trial, draw);
    double u2 = uniform01(stream, trial, draw + 1);
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * M_PI * u2);
}

double CounterRng::truncated_normal(double sigma, std::uint64_t stream, std::uint64_t trial,
                                    std::uint64_t draw) const {
    for (int attempt = 0; attempt < 64; ++attempt) {
        double z = normal(stream, trial, draw + 2 * attempt);
        if (std::abs(z) <= 4.0) return sigma * z;
    }
    return 0.0;  // vanishing probability; keeps the draw budget bounded
}

RobotDesign sample_design(const RobotDesign& nominal, const UncertaintyModel& u,
                          const CounterRng& rng, std::uint64_t trial, bool first_turn_is_aim) {
    RobotDesign out = nominal;
    for (std::size_t i = 0; i < out.segments.size(); ++i) {
        auto& seg = out.segments[i];
        if (u.sigma_length > 0.0) {
            seg.length += rng.uniform(-u.sigma_length, u.sigma_length, rng_stream::design_lengths,
                                      trial, i);
            if (seg.length < 1e-6) seg.length = 1e-6;  // manufactured lengths stay positive
        }
        if (seg.turn != 0.0 && u.sigma_turn > 0.0 && !(first_turn_is_aim && i == 0)) {
            seg.turn += rng.uniform(-u.sigma_turn, u.sigma_turn, rng_stream::design_turns, trial, i);
        }
    }
    return out;
}

MapModel perturb_map(const MapModel& map, double sigma, const CounterRng& rng,
                     std::uint64_t trial) {
    if (sigma <= 0.0) return map;
    for (int attempt = 0; attempt < 16; ++attempt) {
        MapModel out = map;
        std::uint64_t draw = static_cast<std::uint64_t>(attempt) * 100000;
        for (auto& poly : out.obstacles) {
            for (auto& v : poly.vertices) {
                double dx = rng.truncated_normal(sigma, rng_stream::map_vertices, trial, draw);
                draw += 128;
                double dy = rng.truncated_normal(sigma, rng_stream::map_vertices, trial, draw);
                draw += 128;
                v.x += dx;
                v.y += dy;
                v.x = std::clamp(v.x, out.bounds.min.x, out.bounds.max.x);
                v.y = std::clamp(v.y, out.bounds.min.y, out.bounds.max.y);
            }
        }
        try {
            out.validate();
            return out;
        } catch (const std::invalid_argument&) {
            continue;  // degenerate draw; redraw with fresh counters
        }
    }
    return map;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("VINE_NAV_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace

SuccessEstimate mc_success(const MapModel& map, const RobotDesign& design,
                           const UncertaintyModel& u, std::uint64_t trials, std::uint64_t seed,
                           double map_noise, const ModelConfig& cfg, int threads) {
    CounterRng rng(seed);
    bool aim_first = !map.start_angle.has_value();
    std::atomic<std::uint64_t> successes{0};
    std::atomic<std::uint64_t> errors{0};

    auto run_trial = [&](std::uint64_t t) {
        MapModel perturbed;
        const MapModel* m = &map;
        if (map_noise > 0.0) {
            perturbed = perturb_map(map, map_noise, rng, t);
            m = &perturbed;
        }
        RobotDesign d = sample_design(design, u, rng, t, aim_first);
        Deployment dep(*m, d, cfg);
        dep.run();
        bool ok = dep.termination() == TerminationReason::length_reached;
        if (!ok) {
            errors.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        if (dist(dep.state().tip, m->goal) < m->success_radius)
            successes.fetch_add(1, std::memory_order_relaxed);
    };

    int nthreads = resolve_threads(threads);
    if (nthreads <= 1) {
        for (std::uint64_t t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::uint64_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
                    run_trial(t);
            });
        for (auto& th : pool) th.join();
    }

    SuccessEstimate est;
    est.trials = trials;
    est.successes = successes.load();
    est.error_failures = errors.load();
    est.probability = trials ? static_cast<double>(est.successes) / trials : 0.0;
    auto [lo, hi] = wilson_interval(est.successes, trials);
    est.wilson_lo = lo;
    est.wilson_hi = hi;
    est.seed = seed;
    return est;
}

}  // namespace vinenav
