#pragma once

// Manufacturing and map uncertainty: deterministic counter-based sampling,
// design and map perturbation, and Monte-Carlo success estimation.

#include <cstdint>
#include <vector>

#include "vinenav/deployment.hpp"
#include "vinenav/geometry.hpp"
#include "vinenav/kinematics.hpp"

namespace vinenav {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, trial, draw), so trials can be evaluated in any order or in
// parallel with identical results.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const;
    // Uniform in [0, 1).
    double uniform01(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const;
    double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t trial,
                   std::uint64_t draw) const;
    // Standard normal (uses draws `draw` and `draw+1`).
    double normal(std::uint64_t stream, std::uint64_t trial, std::uint64_t draw) const;
    // Normal truncated to +/- 4 sigma (bounded deterministic rejection; each
    // attempt consumes two draws starting at `draw`).
    double truncated_normal(double sigma, std::uint64_t stream, std::uint64_t trial,
                            std::uint64_t draw) const;

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

// Draw-stream identifiers (kept distinct so adding draws to one consumer
// never shifts another's sequence).
namespace rng_stream {
constexpr std::uint64_t design_lengths = 1;
constexpr std::uint64_t design_turns = 2;
constexpr std::uint64_t map_vertices = 3;
constexpr std::uint64_t planner_interior = 4;
constexpr std::uint64_t planner_candidate = 5;
}  // namespace rng_stream

struct UncertaintyModel {
    double sigma_length = 0.0;  // uniform +/- bound on each segment length, meters
    double sigma_turn = 0.0;    // uniform +/- bound on each nonzero turn, radians
};

// One manufactured realization of a design: every segment length is drawn
// uniformly within +/- sigma_length, every nonzero turn within +/- sigma_turn.
// Zero turns are structural (no bend is everted) and are never perturbed.
// When `first_turn_is_aim` is set the first pair's turn is exempt as well: it
// encodes the launch aim rather than a manufactured bend (used with maps
// whose start angle is free).
RobotDesign sample_design(const RobotDesign& nominal, const UncertaintyModel& u,
                          const CounterRng& rng, std::uint64_t trial, bool first_turn_is_aim);

// Map with every obstacle vertex displaced by an isotropic truncated-normal
// (4 sigma) offset. Perturbations that produce an invalid map (degenerate or
// overlapping obstacles, swallowed start/goal) are rejected and redrawn a
// bounded number of times; the nominal map is returned if none succeeds.
MapModel perturb_map(const MapModel& map, double sigma, const CounterRng& rng,
                     std::uint64_t trial);

struct SuccessEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t error_failures = 0;  // wedged / degenerate / trapped / out-of-bounds
    double probability = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::uint64_t seed = 0;
};

// Wilson 95% score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

// Monte-Carlo probability that a manufactured realization of `design`,
// deployed into (a perturbed copy of) `map`, ends with its tip within the
// map's success radius of the goal. Trials are independent and indexed, so
// the result is independent of evaluation order; `threads` is a parallelism
// hint only (0 = use VINE_NAV_THREADS or serial).
SuccessEstimate mc_success(const MapModel& map, const RobotDesign& design,
                           const UncertaintyModel& u, std::uint64_t trials, std::uint64_t seed,
                           double map_noise = 0.0, const ModelConfig& cfg = {}, int threads = 0);

}  // namespace vinenav
