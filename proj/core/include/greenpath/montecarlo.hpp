#pragma once

#include <cstdint>
#include <vector>

#include "greenpath/geometry.hpp"
#include "greenpath/solver.hpp"

namespace greenpath::mc {

// Euler-Maruyama configuration.  Per-coordinate increments have variance
// step_dt/(2 pi) so the walk's generator is the paper's (1/4 pi) Laplacian.
struct WalkConfig {
    double step_dt = 1e-4;
    double eps_shell = 1e-6;           // walk-on-spheres absorption distance
    std::int64_t max_steps = 50'000'000;
};

struct ExitRecord {
    Point exit_point;
    double exit_time = 0.0;
    std::int64_t steps = 0;
};

// Monte Carlo estimate with the usual stderr = sample sd / sqrt(n).  Given
// (seed, n_samples, config) the estimate is bit-identical no matter how many
// workers computed it: walks draw from counter-based substreams keyed by
// (seed, walk index) and are reduced blockwise in walk order.
struct Estimate {
    double mean = 0.0;
    double stderr_est = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Thrown when a walk hits max_steps before exiting.
struct WalkCapped : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One Euler-Maruyama first-exit walk.  Boundary crossings inside a step are
// located by linear interpolation of the crossing fraction; on the
// half-space an exact reflection-principle bridge test additionally catches
// excursions whose endpoints are both interior.
ExitRecord sample_exit_em(const DomainSpec& domain, const Point& start, const WalkConfig& cfg,
                          std::uint64_t seed, std::uint64_t walk_index = 0);

// One walk-on-spheres exit sample (exit point only; harmonic measure up to
// O(eps_shell)).
ExitRecord sample_exit_wos(const DomainSpec& domain, const Point& start, double eps_shell,
                           std::uint64_t seed, std::uint64_t walk_index = 0,
                           std::int64_t max_iters = 1'000'000);

// Feynman-Kac estimators.
Estimate estimate_solution_elliptic(const BoundaryValueProblem& bvp, const Point& eval_at,
                                    std::int64_t n_walks, const WalkConfig& cfg,
                                    std::uint64_t seed, int threads = 0);

Estimate estimate_solution_parabolic(const BoundaryValueProblem& bvp, const SpaceTimePoint& eval_at,
                                     std::int64_t n_walks, const WalkConfig& cfg,
                                     std::uint64_t seed, int threads = 0);

// Mean first-exit time.  Only domains whose exit time has a finite mean are
// accepted: ball interior, strip, box.  (Half-space first passage is a
// stable-1/2 law with no mean; the quadrant survival decays like 1/t, so its
// mean diverges as well.)
Estimate estimate_mean_exit_time(const DomainSpec& domain, const Point& start,
                                 std::int64_t n_walks, const WalkConfig& cfg, std::uint64_t seed,
                                 int threads = 0);

// Batch helpers for the verification suite; results are ordered by walk
// index and therefore independent of the worker count.
struct ExitTimeSamples {
    std::vector<double> times;  // exit times of the walks that exited
    std::int64_t n_capped = 0;  // walks stopped at max_steps (censored)
};
ExitTimeSamples em_exit_times(const DomainSpec& domain, const Point& start, const WalkConfig& cfg,
                              std::int64_t n_walks, std::uint64_t seed, int threads = 0);

std::vector<Point> wos_exit_points(const DomainSpec& domain, const Point& start, double eps_shell,
                                   std::int64_t n_walks, std::uint64_t seed, int threads = 0);

}  // namespace greenpath::mc
