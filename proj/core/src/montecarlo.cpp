#include "greenpath/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "greenpath/rng.hpp"
#include "greenpath/threads.hpp"

namespace greenpath::mc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kBlock = 4096;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// First crossing fraction of the segment p -> p + delta with the domain
// boundary, or +inf if the endpoint stays inside.  Exact for every canonical
// domain (planar walls and spheres).
double crossing_fraction(const DomainSpec& domain, const Point& p, const Point& delta) {
    const int n = domain.n;
    double theta = std::numeric_limits<double>::infinity();
    auto wall_low = [&](int axis) {
        // crossing of x_axis = 0 going downward
        if (p[axis] + delta[axis] < 0.0 && delta[axis] < 0.0)
            theta = std::min(theta, p[axis] / -delta[axis]);
    };
    auto wall_high = [&](int axis) {
        if (p[axis] + delta[axis] > 1.0 && delta[axis] > 0.0)
            theta = std::min(theta, (1.0 - p[axis]) / delta[axis]);
    };
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            return theta;
        case DomainKind::HalfSpace:
            wall_low(n - 1);
            return theta;
        case DomainKind::UnitStrip:
            wall_low(n - 1);
            wall_high(n - 1);
            return theta;
        case DomainKind::UnitBox:
            for (int i = 0; i < n; ++i) {
                wall_low(i);
                wall_high(i);
            }
            return theta;
        case DomainKind::Quadrant:
            wall_low(0);
            wall_low(1);
            return theta;
        case DomainKind::BallInterior:
        case DomainKind::BallExterior: {
            const double R2 = domain.radius * domain.radius;
            double pp = 0.0, pd = 0.0, dd = 0.0;
            for (int i = 0; i < n; ++i) {
                pp += p[i] * p[i];
                pd += p[i] * delta[i];
                dd += delta[i] * delta[i];
            }
            if (dd == 0.0) return theta;
            const double end = pp + 2.0 * pd + dd;
            const bool crossed = (domain.kind == DomainKind::BallInterior) ? end > R2 : end < R2;
            if (!crossed) return theta;
            const double disc = pd * pd - dd * (pp - R2);
            if (disc < 0.0) return theta;
            const double sq = std::sqrt(disc);
            // smallest positive root of |p + theta delta|^2 = R^2
            const double r1 = (-pd - sq) / dd;
            const double r2 = (-pd + sq) / dd;
            if (r1 > 0.0 && r1 <= 1.0) return r1;
            if (r2 > 0.0 && r2 <= 1.0) return r2;
            return theta;
        }
    }
    return theta;
}

Point exit_point_at(const DomainSpec& domain, const Point& p, const Point& delta, double theta) {
    Point q = p;
    for (int i = 0; i < domain.n; ++i) q[i] += theta * delta[i];
    // Snap the nearly-boundary coordinate exactly onto the boundary.
    return project_to_boundary(domain, q);
}

struct WalkOutcome {
    bool exited = false;
    bool capped = false;
    Point exit_point;
    double exit_time = 0.0;
    double f_integral = 0.0;  // left-endpoint sum of f along the path
    Point final_position;     // position at the time cap (parabolic use)
    std::int64_t steps = 0;
};

// Euler-Maruyama walk until first exit, a time cap, or max_steps.  The field
// f (optional) is accumulated along the path with the field time running
// backward from field_t0.
WalkOutcome walk_em(const DomainSpec& domain, const Point& start, const WalkConfig& cfg,
                    RandomStream& rng, double time_cap, const ScalarField* f, double field_t0) {
    const int n = domain.n;
    const bool halfspace = domain.kind == DomainKind::HalfSpace;
    const int wall_axis = n - 1;
    WalkOutcome out;
    Point pos = start;
    Point delta(n);
    double elapsed = 0.0;
    const double sigma = std::sqrt(cfg.step_dt / (2.0 * kPi));
    // Bridge excursions with probability below ~1e-18 are ignored.
    const double bridge_window = 3.3 * cfg.step_dt;

    for (std::int64_t step = 0; step < cfg.max_steps; ++step) {
        double dt = cfg.step_dt;
        double scale = sigma;
        if (elapsed + dt >= time_cap) {
            dt = time_cap - elapsed;
            if (dt <= 0.0) break;
            scale = std::sqrt(dt / (2.0 * kPi));
        }
        if (f && !f->is_zero()) out.f_integral += dt * (*f)(pos, field_t0 - elapsed);
        for (int i = 0; i < n; ++i) delta[i] = scale * rng.normal();
        const double theta = crossing_fraction(domain, pos, delta);
        if (theta <= 1.0) {
            out.exited = true;
            out.exit_point = exit_point_at(domain, pos, delta, theta);
            out.exit_time = elapsed + theta * dt;
            out.steps = step + 1;
            if (f && !f->is_zero()) out.f_integral -= (1.0 - theta) * dt * (*f)(pos, field_t0 - elapsed);
            return out;
        }
        if (halfspace) {
            const double za = pos[wall_axis];
            const double zb = za + delta[wall_axis];
            if (za * zb < bridge_window) {
                // Reflection principle: a Brownian bridge between two interior
                // points touches the wall with probability exp(-4 pi za zb / dt).
                const double p_cross = std::exp(-4.0 * kPi * za * zb / dt);
                if (rng.uniform() < p_cross) {
                    const double frac = za / (za + zb);
                    Point mid = pos;
                    for (int i = 0; i < n; ++i) mid[i] += frac * delta[i];
                    mid[wall_axis] = 0.0;
                    out.exited = true;
                    out.exit_point = mid;
                    out.exit_time = elapsed + frac * dt;
                    out.steps = step + 1;
                    if (f && !f->is_zero())
                        out.f_integral -= (1.0 - frac) * dt * (*f)(pos, field_t0 - elapsed);
                    return out;
                }
            }
        }
        pos += delta;
        elapsed += dt;
        out.steps = step + 1;
        if (elapsed >= time_cap) break;
    }
    out.final_position = pos;
    out.exit_time = elapsed;
    out.capped = elapsed < time_cap && !out.exited;
    return out;
}

// Deterministic blockwise reduction of per-walk values.
template <typename PerWalk>
Estimate reduce_walks(std::int64_t n_walks, std::uint64_t seed, int threads, PerWalk&& per_walk) {
    if (n_walks < 1) fail("Monte Carlo estimators need n_walks >= 1");
    const std::int64_t n_blocks = (n_walks + kBlock - 1) / kBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_sq(static_cast<std::size_t>(n_blocks), 0.0);
    parallel_blocks(n_walks, kBlock, threads, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        double sum = 0.0, sq = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
            const double v = per_walk(static_cast<std::uint64_t>(i));
            sum += v;
            sq += v * v;
        }
        block_sum[static_cast<std::size_t>(b)] = sum;
        block_sq[static_cast<std::size_t>(b)] = sq;
    });
    double sum = 0.0, sq = 0.0;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        sum += block_sum[static_cast<std::size_t>(b)];
        sq += block_sq[static_cast<std::size_t>(b)];
    }
    Estimate est;
    est.n_samples = n_walks;
    est.seed = seed;
    est.mean = sum / static_cast<double>(n_walks);
    if (n_walks > 1) {
        const double var = std::max(0.0, (sq - sum * est.mean) / static_cast<double>(n_walks - 1));
        est.stderr_est = std::sqrt(var / static_cast<double>(n_walks));
    }
    return est;
}

void check_walk_start(const DomainSpec& domain, const Point& start) {
    if (!contains(domain, start)) fail("walk start point outside " + domain.to_string());
}

}  // namespace

ExitRecord sample_exit_em(const DomainSpec& domain, const Point& start, const WalkConfig& cfg,
                          std::uint64_t seed, std::uint64_t walk_index) {
    check_walk_start(domain, start);
    if (domain.kind == DomainKind::FreeSpace) fail("sample_exit_em: free space has no boundary");
    RandomStream rng(seed, walk_index);
    const WalkOutcome out = walk_em(domain, start, cfg, rng,
                                    std::numeric_limits<double>::infinity(), nullptr, 0.0);
    if (!out.exited)
        throw WalkCapped("sample_exit_em: max_steps (" + std::to_string(cfg.max_steps) +
                         ") exceeded before exit");
    return {out.exit_point, out.exit_time, out.steps};
}

ExitRecord sample_exit_wos(const DomainSpec& domain, const Point& start, double eps_shell,
                           std::uint64_t seed, std::uint64_t walk_index, std::int64_t max_iters) {
    check_walk_start(domain, start);
    if (!(eps_shell > 0.0)) fail("sample_exit_wos: eps_shell must be positive");
    if (domain.kind == DomainKind::FreeSpace) fail("sample_exit_wos: free space has no boundary");
    RandomStream rng(seed, walk_index);
    Point pos = start;
    Point dir(domain.n);
    for (std::int64_t it = 0; it < max_iters; ++it) {
        const double d = distance_to_boundary(domain, pos);
        if (d < eps_shell) {
            return {project_to_boundary(domain, pos), 0.0, it};
        }
        rng.unit_vector(domain.n, dir);
        for (int i = 0; i < domain.n; ++i) pos[i] += d * dir[i];
    }
    throw WalkCapped("sample_exit_wos: iteration cap exceeded");
}

Estimate estimate_solution_elliptic(const BoundaryValueProblem& bvp, const Point& eval_at,
                                    std::int64_t n_walks, const WalkConfig& cfg,
                                    std::uint64_t seed, int threads) {
    bvp.validate();
    if (bvp.pde_class != PdeClass::Elliptic) fail("estimate_solution_elliptic: not an elliptic problem");
    if (bvp.bc != BoundaryCondition::Dirichlet)
        fail("estimate_solution_elliptic: Dirichlet problems only");
    check_walk_start(bvp.domain, eval_at);
    const bool pure_boundary = bvp.f.is_zero();
    return reduce_walks(n_walks, seed, threads, [&](std::uint64_t i) {
        if (pure_boundary) {
            const ExitRecord rec = sample_exit_wos(bvp.domain, eval_at, cfg.eps_shell, seed, i);
            return bvp.phi(rec.exit_point, 0.0);
        }
        RandomStream rng(seed, i);
        const WalkOutcome out = walk_em(bvp.domain, eval_at, cfg, rng,
                                        std::numeric_limits<double>::infinity(), &bvp.f, 0.0);
        if (!out.exited) throw WalkCapped("estimate_solution_elliptic: walk hit max_steps");
        return bvp.phi(out.exit_point, 0.0) + out.f_integral;
    });
}

Estimate estimate_solution_parabolic(const BoundaryValueProblem& bvp,
                                     const SpaceTimePoint& eval_at, std::int64_t n_walks,
                                     const WalkConfig& cfg, std::uint64_t seed, int threads) {
    bvp.validate();
    if (bvp.pde_class != PdeClass::Parabolic)
        fail("estimate_solution_parabolic: not a parabolic problem");
    if (bvp.bc != BoundaryCondition::Dirichlet)
        fail("estimate_solution_parabolic: Dirichlet problems only");
    if (bvp.kcase != KernelCase::Real) fail("estimate_solution_parabolic: s = i not supported");
    if (!(eval_at.time > 0.0)) fail("estimate_solution_parabolic: evaluation time must be positive");
    check_walk_start(bvp.domain, eval_at.space);
    const double t = eval_at.time;
    return reduce_walks(n_walks, seed, threads, [&](std::uint64_t i) {
        RandomStream rng(seed, i);
        const WalkOutcome out = walk_em(bvp.domain, eval_at.space, cfg, rng, t, &bvp.f, t);
        double value = out.f_integral;
        if (out.exited)
            value += bvp.phi(out.exit_point, t - out.exit_time);
        else
            value += bvp.psi(out.final_position, 0.0);
        return value;
    });
}

Estimate estimate_mean_exit_time(const DomainSpec& domain, const Point& start,
                                 std::int64_t n_walks, const WalkConfig& cfg, std::uint64_t seed,
                                 int threads) {
    switch (domain.kind) {
        case DomainKind::BallInterior:
        case DomainKind::UnitStrip:
        case DomainKind::UnitBox:
            break;
        default:
            fail("estimate_mean_exit_time: exit time of " + domain.to_string() +
                 " has no finite mean (or no a.s. exit)");
    }
    check_walk_start(domain, start);
    if (on_boundary(domain, start)) {
        Estimate est;
        est.mean = 0.0;
        est.n_samples = n_walks;
        est.seed = seed;
        return est;
    }
    return reduce_walks(n_walks, seed, threads, [&](std::uint64_t i) {
        RandomStream rng(seed, i);
        const WalkOutcome out = walk_em(domain, start, cfg, rng,
                                        std::numeric_limits<double>::infinity(), nullptr, 0.0);
        if (!out.exited) throw WalkCapped("estimate_mean_exit_time: walk hit max_steps");
        return out.exit_time;
    });
}

ExitTimeSamples em_exit_times(const DomainSpec& domain, const Point& start, const WalkConfig& cfg,
                              std::int64_t n_walks, std::uint64_t seed, int threads) {
    check_walk_start(domain, start);
    std::vector<double> slots(static_cast<std::size_t>(n_walks),
                              std::numeric_limits<double>::quiet_NaN());
    parallel_blocks(n_walks, kBlock, threads, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            RandomStream rng(seed, static_cast<std::uint64_t>(i));
            const WalkOutcome out = walk_em(domain, start, cfg, rng,
                                            std::numeric_limits<double>::infinity(), nullptr, 0.0);
            if (out.exited) slots[static_cast<std::size_t>(i)] = out.exit_time;
        }
    });
    ExitTimeSamples samples;
    samples.times.reserve(slots.size());
    for (double t : slots) {
        if (std::isnan(t))
            ++samples.n_capped;
        else
            samples.times.push_back(t);
    }
    return samples;
}

std::vector<Point> wos_exit_points(const DomainSpec& domain, const Point& start, double eps_shell,
                                   std::int64_t n_walks, std::uint64_t seed, int threads) {
    check_walk_start(domain, start);
    std::vector<Point> points(static_cast<std::size_t>(n_walks));
    parallel_blocks(n_walks, kBlock, threads, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            points[static_cast<std::size_t>(i)] =
                sample_exit_wos(domain, start, eps_shell, seed, static_cast<std::uint64_t>(i)).exit_point;
    });
    return points;
}

}  // namespace greenpath::mc
