#include "greenpath/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "greenpath/covering.hpp"
#include "greenpath/geometry.hpp"
#include "greenpath/kernels.hpp"
#include "greenpath/montecarlo.hpp"
#include "greenpath/quadrature.hpp"
#include "greenpath/rng.hpp"
#include "greenpath/solver.hpp"
#include "greenpath/stats.hpp"

namespace greenpath::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

double rand_in(RandomStream& rng, double a, double b) { return a + (b - a) * rng.uniform(); }

Point random_in_ball(RandomStream& rng, int n, double radius) {
    Point p(n);
    while (true) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            p[i] = rand_in(rng, -radius, radius);
            norm2 += p[i] * p[i];
        }
        if (norm2 <= radius * radius) return p;
    }
}

// 2n+1-point central finite-difference Laplacian.
double fd_laplacian(const std::function<double(const Point&)>& f, const Point& x, double h) {
    const int n = x.dim();
    double sum = -2.0 * n * f(x);
    for (int i = 0; i < n; ++i) {
        Point p = x, m = x;
        p[i] += h;
        m[i] -= h;
        sum += f(p) + f(m);
    }
    return sum / (h * h);
}

// First-passage CDF of the half-space walk started at x (unit start: x = 1):
// F(t) = erfc(x sqrt(pi/t)).
double first_passage_cdf(double x, double t) {
    if (t <= 0.0) return 0.0;
    return std::erfc(x * std::sqrt(kPi / t));
}

// ---------------------------------------------------------------------------
// 1. Free-space elliptic kernel vs adaptive quadrature
// ---------------------------------------------------------------------------
CriterionResult c01_free_elliptic(const Options&) {
    CriterionResult res{1, "free-elliptic vs tau-quadrature", false, 0.0, 1e-10, true, {}};
    Timer timer;
    for (int n : {3, 4, 5}) {
        for (double r : {0.5, 1.0, 2.0}) {
            // integral_0^inf tau^{-n/2} e^{-pi r^2/tau} dtau = 2 integral_0^inf
            // w^{n-3} e^{-pi r^2 w^2} dw after tau = 1/w^2.
            auto f = [n, r](double w) {
                return 2.0 * std::pow(w, n - 3) * std::exp(-kPi * r * r * w * w);
            };
            const double oracle = integrate_to_inf(f, 0.0, 1e-14, 1e-12).value;
            const double value = free_elliptic(n, r);
            res.discrepancy = std::max(res.discrepancy, std::abs(value - oracle) / std::abs(oracle));
        }
    }
    res.time_ok = timer.seconds() < 1.0;
    res.pass = res.discrepancy <= res.threshold && res.time_ok;
    return res;
}

// ---------------------------------------------------------------------------
// 2. Heat semigroup
// ---------------------------------------------------------------------------
CriterionResult c02_semigroup(const Options&) {
    CriterionResult res{2, "heat semigroup (free n=1,2; half-space n=1)", false, 0.0, 1e-8, true, {}};
    const double combos[5][4] = {// x, y, t1, t2 (last coordinate only)
                                 {0.0, 0.3, 0.3, 0.5},
                                 {0.5, -0.2, 1.0, 1.0},
                                 {1.0, 1.0, 0.2, 1.3},
                                 {-0.7, 0.4, 0.7, 0.7},
                                 {0.2, 1.4, 1.5, 0.4}};
    auto k1 = [](double a, double b, double t) {
        return std::pow(t, -0.5) * std::exp(-kPi * (a - b) * (a - b) / t);
    };
    for (const auto& c : combos) {
        const double x = c[0], y = c[1], t1 = c[2], t2 = c[3];
        const double w = 6.0 * std::sqrt(std::min(t1, t2));
        const double lo = std::min(x, y) - w, hi = std::max(x, y) + w;
        // free space, n = 1
        auto conv1 = [&](double z) { return k1(x, z, t1) * k1(z, y, t2); };
        const double got1 = integrate(conv1, lo, hi, 1e-11, 0.0, 200000, 8).value;
        res.discrepancy = std::max(res.discrepancy, std::abs(got1 - k1(x, y, t1 + t2)));
        // free space, n = 2 (second coordinate displaced by 0.4)
        const double x2 = x, y2 = y + 0.4;
        auto conv2 = [&](double z1, double z2) {
            return k1(x, z1, t1) * k1(x2, z2, t1) * k1(z1, y, t2) * k1(z2, y2, t2);
        };
        const double got2 = integrate2d(conv2, lo, hi, lo - 0.5, hi + 0.5, 1e-11, 0.0, 4000000, 8).value;
        res.discrepancy = std::max(
            res.discrepancy, std::abs(got2 - k1(x, y, t1 + t2) * k1(x2, y2, t1 + t2)));
    }
    // half-space n = 1 (Dirichlet), five positive-coordinate combos
    const DomainSpec half = DomainSpec::half_space(1);
    const double hcombos[5][4] = {{0.4, 0.3, 0.3, 0.5},
                                  {0.5, 0.2, 1.0, 1.0},
                                  {1.0, 1.0, 0.2, 1.3},
                                  {0.7, 0.4, 0.7, 0.7},
                                  {0.2, 1.4, 1.5, 0.4}};
    for (const auto& c : hcombos) {
        const double x = c[0], y = c[1], t1 = c[2], t2 = c[3];
        const Point px{x}, py{y};
        auto conv = [&](double z) {
            const Point pz{z};
            return heat_domain_kernel(half, BoundaryCondition::Dirichlet, px, t1, pz, 1e-14) *
                   heat_domain_kernel(half, BoundaryCondition::Dirichlet, pz, t2, py, 1e-14);
        };
        const double hi = std::max(x, y) + 6.0 * std::sqrt(std::min(t1, t2));
        const double got = integrate(conv, 0.0, hi, 1e-11, 0.0, 200000, 8).value;
        const double want =
            heat_domain_kernel(half, BoundaryCondition::Dirichlet, px, t1 + t2, py, 1e-14);
        res.discrepancy = std::max(res.discrepancy, std::abs(got - want));
    }
    res.pass = res.discrepancy <= res.threshold;
    return res;
}

// ---------------------------------------------------------------------------
// 3. Harmonicity of the Dirichlet Green functions
// ---------------------------------------------------------------------------
CriterionResult c03_harmonicity(const Options& options) {
    CriterionResult res{3, "FD harmonicity of ball/quadrant/strip/box Green", false, 0.0, 1e-4, true, {}};
    const double h = 1e-3;
    const int probes = options.suite == Suite::Full ? 20 : 5;
    RandomStream rng(options.seed, 0x0300);

    auto run_domain = [&](const DomainSpec& domain, double tol,
                          const std::function<std::pair<Point, Point>()>& draw) {
        for (int k = 0; k < probes; ++k) {
            const auto [x, xp] = draw();
            auto green = [&](const Point& p) {
                return domain_green(domain, BoundaryCondition::Dirichlet, x, p, tol);
            };
            res.discrepancy = std::max(res.discrepancy, std::abs(fd_laplacian(green, xp, h)));
        }
    };

    // Ball(3,1): source near the center, probe in an outer shell.
    const DomainSpec ball = DomainSpec::ball(3, 1.0);
    run_domain(ball, 1e-9, [&]() -> std::pair<Point, Point> {
        while (true) {
            const Point x = random_in_ball(rng, 3, 0.25);
            const Point xp = random_in_ball(rng, 3, 0.65);
            if (xp.norm() > 0.5 && x.dist(xp) > 0.7) return {x, xp};
        }
    });
    // Quadrant
    run_domain(DomainSpec::quadrant(), 1e-9, [&]() -> std::pair<Point, Point> {
        while (true) {
            const Point x{rand_in(rng, 0.4, 1.6), rand_in(rng, 0.4, 1.6)};
            const Point xp{rand_in(rng, 0.4, 1.6), rand_in(rng, 0.4, 1.6)};
            if (x.dist(xp) > 0.8) return {x, xp};
        }
    });
    // Strip(3): separated transversally.
    run_domain(DomainSpec::unit_strip(3), 1e-8, [&]() -> std::pair<Point, Point> {
        const Point x{rand_in(rng, -0.5, 0.5), rand_in(rng, -0.5, 0.5), rand_in(rng, 0.37, 0.63)};
        Point xp = x;
        const double angle = rand_in(rng, 0.0, 2.0 * kPi);
        xp[0] += 0.9 * std::cos(angle);
        xp[1] += 0.9 * std::sin(angle);
        xp[2] = rand_in(rng, 0.37, 0.63);
        return {x, xp};
    });
    // Box(2): diagonal pairs (the unit box cannot hold widely separated
    // probes, so keep them on opposite corners with jitter).
    run_domain(DomainSpec::unit_box(2), 5e-12, [&]() -> std::pair<Point, Point> {
        const double j1 = rand_in(rng, -0.02, 0.02), j2 = rand_in(rng, -0.02, 0.02);
        const double j3 = rand_in(rng, -0.02, 0.02), j4 = rand_in(rng, -0.02, 0.02);
        if (rng.uniform() < 0.5)
            return {Point{0.33 + j1, 0.33 + j2}, Point{0.67 + j3, 0.67 + j4}};
        return {Point{0.33 + j1, 0.67 + j2}, Point{0.67 + j3, 0.33 + j4}};
    });

    res.pass = res.discrepancy <= res.threshold;
    return res;
}

// ---------------------------------------------------------------------------
// 4. Dirichlet boundary vanishing + Neumann derivative vanishing
// ---------------------------------------------------------------------------
CriterionResult c04_boundary_vanishing(const Options& options) {
    CriterionResult res{4, "Dirichlet boundary vanishing / Neumann derivative", false, 0.0, 1e-12, true, {}};
    const int probes = options.suite == Suite::Full ? 100 : 20;
    RandomStream rng(options.seed, 0x0400);

    auto check = [&](const DomainSpec& domain, const Point& x, const Point& xb, double tol) {
        const double v = domain_green(domain, BoundaryCondition::Dirichlet, x, xb, tol);
        res.discrepancy = std::max(res.discrepancy, std::abs(v));
    };

    for (int k = 0; k < probes; ++k) {
        // Half-space(2)
        check(DomainSpec::half_space(2), Point{0.3, 0.7}, Point{rand_in(rng, -2.0, 2.0), 0.0}, 1e-12);
        // Ball(3,1)
        {
            Point dir(3);
            rng.unit_vector(3, dir);
            check(DomainSpec::ball(3, 1.0), Point{0.4, 0.1, -0.2}, dir, 1e-12);
        }
        // Quadrant
        if (k % 2 == 0)
            check(DomainSpec::quadrant(), Point{1.0, 1.3}, Point{rand_in(rng, 0.0, 3.0), 0.0}, 1e-12);
        else
            check(DomainSpec::quadrant(), Point{1.0, 1.3}, Point{0.0, rand_in(rng, 0.0, 3.0)}, 1e-12);
        // Strip(3): alternate walls
        {
            const double wall = (k % 2 == 0) ? 0.0 : 1.0;
            check(DomainSpec::unit_strip(3), Point{0.0, 0.0, 0.4},
                  Point{rand_in(rng, -1.0, 1.0), rand_in(rng, -1.0, 1.0), wall}, 1e-12);
        }
        // Box(2): cycle the four edges
        {
            const double s = rand_in(rng, 0.0, 1.0);
            Point xb(2);
            switch (k % 4) {
                case 0: xb = Point{s, 0.0}; break;
                case 1: xb = Point{s, 1.0}; break;
                case 2: xb = Point{0.0, s}; break;
                default: xb = Point{1.0, s}; break;
            }
            check(DomainSpec::unit_box(2), Point{0.41, 0.58}, xb, 1e-12);
        }
    }

    // Neumann: the normal derivative of the half-space heat kernel vanishes
    // on the wall.  The kernel's even extension across the wall is its own
    // image formula, so the central difference is exact.
    double neumann_worst = 0.0;
    const double h = 1e-3;
    for (int k = 0; k < 10; ++k) {
        const double x = rand_in(rng, 0.2, 2.0);
        const double dt = rand_in(rng, 0.3, 1.5);
        const double rho = rand_in(rng, -1.0, 1.0);
        auto kernel_ext = [&](double z) {
            const double r2p = rho * rho + (z - x) * (z - x);
            const double r2m = rho * rho + (z + x) * (z + x);
            return free_heat(2, std::sqrt(r2p), dt, KernelCase::Real).real() +
                   free_heat(2, std::sqrt(r2m), dt, KernelCase::Real).real();
        };
        // consistency of the extension with the public kernel at z = h
        const double via_op =
            heat_domain_kernel(DomainSpec::half_space(2), BoundaryCondition::Neumann,
                               Point{0.0, x}, dt, Point{rho, h}, 1e-14);
        neumann_worst = std::max(neumann_worst, std::abs(via_op - kernel_ext(h)));
        neumann_worst = std::max(neumann_worst, std::abs(kernel_ext(h) - kernel_ext(-h)) / (2.0 * h));
    }
    res.detail = "neumann-derivative max " + fmt(neumann_worst) + " (threshold 1.0e-08)";
    res.pass = res.discrepancy <= res.threshold && neumann_worst <= 1e-8;
    return res;
}

// ---------------------------------------------------------------------------
// 5. Poisson kernel unit mass
// ---------------------------------------------------------------------------
CriterionResult c05_poisson_mass(const Options&) {
    CriterionResult res{5, "ball Poisson kernel mass and phi=1 solve", false, 0.0, 1e-8, true, {}};
    for (double R : {1.0, 2.0}) {
        const DomainSpec ball = DomainSpec::ball(3, R);
        for (double frac : {0.0, 0.3, 0.9}) {
            const Point x{frac * R, 0.0, 0.0};
            auto kernel = [&](const Point& y) { return boundary_kernel_elliptic(ball, x, y); };
            const double mass = sphere_integral(ball, kernel, 2e-9);
            res.discrepancy = std::max(res.discrepancy, std::abs(mass - 1.0));
        }
    }
    BoundaryValueProblem bvp;
    bvp.domain = DomainSpec::ball(3, 1.0);
    bvp.pde_class = PdeClass::Elliptic;
    bvp.phi = ScalarField::constant(1.0);
    QuadratureSpec quad;
    quad.target_tol = 1e-9;
    for (double frac : {0.0, 0.45, 0.92}) {
        const double u = solve_elliptic(bvp, Point{0.0, frac, 0.0}, quad);
        res.discrepancy = std::max(res.discrepancy, std::abs(u - 1.0));
    }
    res.pass = res.discrepancy <= res.threshold;
    return res;
}

// ---------------------------------------------------------------------------
// 6. First-passage law on the half-line
// ---------------------------------------------------------------------------
CriterionResult c06_first_passage(const Options& options) {
    CriterionResult res{6, "half-space first passage: mass + EM/KS", false, 0.0, 1.0, true, {}};
    Timer timer;
    // (a) analytic mass: integral of dt^{-3/2} e^{-pi/dt} over (0,inf) = 1.
    // The head is integrated directly; the heavy t^{-3/2} tail is tamed by
    // the exact substitution t = 1/w^2 (dt = -2 w^{-3} dw).
    const DomainSpec half = DomainSpec::half_space(1);
    const Point x1{1.0};
    auto density = [&](double dt) { return boundary_kernel_parabolic(half, x1, dt, Point{0.0}); };
    const double head = integrate(density, 0.0, 2.0, 1e-12).value;
    auto tail_sub = [&](double w) {
        const double t = 1.0 / (w * w);
        return density(t) * 2.0 / (w * w * w);
    };
    const double tail = integrate(tail_sub, 0.0, 1.0 / std::sqrt(2.0), 1e-12).value;
    const double mass_err = std::abs(head + tail - 1.0);

    // (b) bridge-corrected EM exit times vs the first-passage law.  Walks
    // still inside at T_max = max_steps*dt are censored; the uncensored
    // sample is tested against the conditional CDF and the censored count
    // against the tail mass.
    mc::WalkConfig cfg;
    cfg.step_dt = 1e-4;
    cfg.max_steps = 40'000;  // T_max = 4
    const std::int64_t n_walks = options.suite == Suite::Full ? 100'000 : 20'000;
    const double t_max = cfg.step_dt * static_cast<double>(cfg.max_steps);
    const mc::ExitTimeSamples samples =
        mc::em_exit_times(half, x1, cfg, n_walks, options.seed + 6, options.threads);
    const double f_cap = first_passage_cdf(1.0, t_max);
    auto cond_cdf = [&](double t) { return first_passage_cdf(1.0, t) / f_cap; };
    const double ks = ks_distance(samples.times, cond_cdf);
    const double n_eff = static_cast<double>(samples.times.size());
    const double ks_threshold = 1.63 / std::sqrt(n_eff);
    const double cap_expect = static_cast<double>(n_walks) * (1.0 - f_cap);
    const double cap_sigma = std::sqrt(static_cast<double>(n_walks) * f_cap * (1.0 - f_cap));
    const double cap_z = (static_cast<double>(samples.n_capped) - cap_expect) / cap_sigma;

    res.detail = "mass_err " + fmt(mass_err) + "; ks " + fmt(ks) + " (thr " + fmt(ks_threshold) +
                 ", n_eff " + std::to_string(samples.times.size()) + "); censored z " + fmt(cap_z);
    res.discrepancy = ks / ks_threshold;  // normalized: pass iff < 1
    res.threshold = 1.0;
    res.time_ok = timer.seconds() < 60.0;
    res.pass = mass_err <= 1e-8 && ks < ks_threshold && std::abs(cap_z) < 3.0 && res.time_ok;
    return res;
}

// ---------------------------------------------------------------------------
// 7. erf solution of the half-space Dirichlet problem
// ---------------------------------------------------------------------------
CriterionResult c07_erf_solution(const Options& options) {
    CriterionResult res{7, "half-space parabolic phi=1 solution (erf)", false, 0.0, 1e-6, true, {}};
    BoundaryValueProblem bvp;
    bvp.domain = DomainSpec::half_space(1);
    bvp.pde_class = PdeClass::Parabolic;
    bvp.phi = ScalarField::constant(1.0);
    const SpaceTimePoint at{Point{1.0}, 1.0};
    const double expected = 1.0 - std::erf(std::sqrt(kPi));
    QuadratureSpec quad;
    quad.target_tol = 1e-9;
    const double solved = solve_parabolic(bvp, at, quad);
    res.discrepancy = std::abs(solved - expected);

    mc::WalkConfig cfg;
    cfg.step_dt = 1e-4;
    const std::int64_t n_walks = options.suite == Suite::Full ? 100'000 : 20'000;
    const mc::Estimate est =
        mc::estimate_solution_parabolic(bvp, at, n_walks, cfg, options.seed + 7, options.threads);
    const double z = (est.mean - expected) / est.stderr_est;
    res.detail = "solver " + fmt(solved) + "; mc " + fmt(est.mean) + " +- " + fmt(est.stderr_est) +
                 " (z " + fmt(z) + ")";
    res.pass = res.discrepancy <= res.threshold && std::abs(z) <= 3.0;
    return res;
}

// ---------------------------------------------------------------------------
// 8. Harmonic measure via walk-on-spheres
// ---------------------------------------------------------------------------
CriterionResult c08_harmonic_measure(const Options& options) {
    CriterionResult res{8, "WoS harmonic measure vs Poisson cubature", false, 0.0, 0.0, true, {}};
    Timer timer;
    const DomainSpec ball = DomainSpec::ball(3, 1.0);
    const Point start{0.5, 0.0, 0.0};
    const std::int64_t n_walks = options.suite == Suite::Full ? 100'000 : 20'000;
    const std::vector<Point> exits =
        mc::wos_exit_points(ball, start, 1e-6, n_walks, options.seed + 8, options.threads);

    const SpherePatches patches{4, 6};
    std::vector<std::int64_t> counts(static_cast<std::size_t>(patches.count()), 0);
    for (const Point& p : exits) ++counts[static_cast<std::size_t>(patches.classify(p))];

    std::vector<double> expected(static_cast<std::size_t>(patches.count()), 0.0);
    for (int band = 0; band < patches.n_bands; ++band) {
        const double z0 = -1.0 + 2.0 * band / patches.n_bands;
        const double z1 = -1.0 + 2.0 * (band + 1) / patches.n_bands;
        for (int sector = 0; sector < patches.n_sectors; ++sector) {
            const double a0 = 2.0 * kPi * sector / patches.n_sectors;
            const double a1 = 2.0 * kPi * (sector + 1) / patches.n_sectors;
            auto kernel = [&](const Point& y) { return boundary_kernel_elliptic(ball, start, y); };
            expected[static_cast<std::size_t>(band * patches.n_sectors + sector)] =
                static_cast<double>(n_walks) * sphere_integral(ball, kernel, 1e-10, z0, z1, a0, a1);
        }
    }
    const double stat = chi_square(counts, expected);
    const double quantile = chi_square_quantile(patches.count() - 1, 3.0);
    res.discrepancy = stat;
    res.threshold = quantile;
    res.time_ok = timer.seconds() < 10.0;
    res.pass = stat < quantile && res.time_ok;
    return res;
}

// ---------------------------------------------------------------------------
// 9. Mean exit time of the ball
// ---------------------------------------------------------------------------
CriterionResult c09_mean_exit_time(const Options& options) {
    CriterionResult res{9, "ball mean exit time 2*pi/3", false, 0.0, 0.0, true, {}};
    mc::WalkConfig cfg;
    cfg.step_dt = 1e-4;
    const std::int64_t n_walks = options.suite == Suite::Full ? 10'000 : 2'000;
    const mc::Estimate est = mc::estimate_mean_exit_time(
        DomainSpec::ball(3, 1.0), Point{0.0, 0.0, 0.0}, n_walks, cfg, options.seed + 9,
        options.threads);
    const double expected = 2.0 * kPi / 3.0;
    // Euler-Maruyama first-exit times are biased high by O(sqrt(dt)); the
    // documented band constant 2.0 covers it comfortably at dt = 1e-4.
    const double band = 3.0 * est.stderr_est + 2.0 * std::sqrt(cfg.step_dt);
    res.discrepancy = std::abs(est.mean - expected);
    res.threshold = band;
    res.detail = "mc " + fmt(est.mean) + " +- " + fmt(est.stderr_est) + "; band " + fmt(band);
    res.pass = res.discrepancy <= band;
    return res;
}

// ---------------------------------------------------------------------------
// 10. Fixed-energy kernel
// ---------------------------------------------------------------------------
CriterionResult c10_fixed_energy(const Options&) {
    CriterionResult res{10, "fixed-energy kernel closed form vs quadrature", false, 0.0, 1e-8, true, {}};
    for (double r : {0.5, 1.0, 2.0}) {
        for (double energy : {0.1, 1.0}) {
            auto f = [r, energy](double tau) {
                return std::pow(tau, -1.5) *
                       std::exp(-2.0 * kPi * energy * tau - kPi * r * r / tau);
            };
            const double split = r / std::sqrt(2.0 * energy);
            const double oracle =
                integrate(f, 0.0, split, 1e-13).value + integrate_to_inf(f, split, 1e-13).value;
            const double closed = fixed_energy(3, r, energy);
            res.discrepancy = std::max(res.discrepancy, std::abs(closed - oracle));
            const double want = std::exp(-2.0 * kPi * r * std::sqrt(2.0 * energy)) / r;
            res.discrepancy = std::max(res.discrepancy, std::abs(closed - want));
        }
    }
    // E = 0 reduction to the free elliptic kernel.
    double reduction = 0.0;
    for (int n : {3, 4, 5})
        for (double r : {0.5, 1.0, 2.0})
            reduction = std::max(reduction,
                                 std::abs(fixed_energy(n, r, 0.0) - free_elliptic(n, r)) /
                                     free_elliptic(n, r));
    res.detail = "E=0 reduction max rel " + fmt(reduction) + " (threshold 1.0e-10)";
    res.pass = res.discrepancy <= res.threshold && reduction <= 1e-10;
    return res;
}

// ---------------------------------------------------------------------------
// 11. Strip truncation: boundary values and sine-series oracle
// ---------------------------------------------------------------------------
double strip_sine_series(const Point& x, const Point& xp) {
    // Dirichlet Green function of the unit strip in R^3 in the paper
    // normalization: 4 sum_k sin(k pi z) sin(k pi z') K0(k pi rho).
    const double rho = std::hypot(x[0] - xp[0], x[1] - xp[1]);
    const double z = x[2], zp = xp[2];
    double sum = 0.0;
    for (int k = 1; k <= 10'000; ++k) {
        const double envelope = 4.0 * std::cyl_bessel_k(0, k * kPi * rho);
        sum += envelope * std::sin(k * kPi * z) * std::sin(k * kPi * zp);
        // The K0 envelope bounds the whole remainder (geometric decay), so
        // an accidentally small sine cannot stop the series early.
        if (envelope < 1e-16) break;
    }
    return sum;
}

CriterionResult c11_strip_truncation(const Options& options) {
    CriterionResult res{11, "strip auto-truncation vs sine-series oracle", false, 0.0, 1e-8, true, {}};
    const DomainSpec strip = DomainSpec::unit_strip(3);
    RandomStream rng(options.seed, 0x1100);
    // Boundary values at the auto-selected window must sit below 1e-10.
    double boundary_worst = 0.0;
    const int boundary_probes = options.suite == Suite::Full ? 20 : 6;
    for (int k = 0; k < boundary_probes; ++k) {
        const Point x{0.0, 0.0, rand_in(rng, 0.2, 0.8)};
        const Point xb{rand_in(rng, -0.7, 0.7), rand_in(rng, -0.7, 0.7), (k % 2) ? 1.0 : 0.0};
        boundary_worst = std::max(
            boundary_worst, std::abs(domain_green(strip, BoundaryCondition::Dirichlet, x, xb, 1e-10)));
    }
    // Interior agreement with the separated-variables series.
    const double pairs[5][6] = {{0.0, 0.0, 0.3, 0.4, 0.1, 0.6},
                                {0.2, -0.1, 0.5, -0.3, 0.3, 0.45},
                                {0.0, 0.5, 0.72, 0.6, 0.0, 0.35},
                                {-0.4, 0.0, 0.22, 0.3, 0.5, 0.58},
                                {0.1, 0.1, 0.5, 0.45, -0.4, 0.62}};
    for (const auto& p : pairs) {
        const Point x{p[0], p[1], p[2]};
        const Point xp{p[3], p[4], p[5]};
        const double via_images = domain_green(strip, BoundaryCondition::Dirichlet, x, xp, 1e-9);
        const double via_series = strip_sine_series(x, xp);
        res.discrepancy = std::max(res.discrepancy, std::abs(via_images - via_series));
    }
    res.detail = "boundary max " + fmt(boundary_worst) + " (threshold 1.0e-10)";
    res.pass = res.discrepancy <= res.threshold && boundary_worst <= 1e-10;
    return res;
}

// ---------------------------------------------------------------------------
// 12. Wave solver: static limit and mollifier convergence order
// ---------------------------------------------------------------------------
CriterionResult c12_wave(const Options&) {
    CriterionResult res{12, "wave static limit + mollified I order", false, 0.0, 1e-3, true, {}};
    // Compactly supported C^2 bump.
    auto bump = [](const Point& y, double) {
        const double r2 = y.norm_sq();
        if (r2 >= 1.0) return 0.0;
        const double s = 1.0 - r2;
        return s * s * s;
    };
    BoundaryValueProblem wave;
    wave.domain = DomainSpec::free_space(3);
    wave.pde_class = PdeClass::Hyperbolic;
    wave.kcase = KernelCase::Imaginary;
    wave.f = ScalarField::function(bump).with_support_radius(1.0);
    QuadratureSpec quad;
    quad.target_tol = 1e-7;
    const Point x{0.3, 0.2, 0.1};
    const double t = 20.0;  // 10 * diam(support)
    const double via_wave = solve_wave_retarded(wave, {x, t}, quad);

    BoundaryValueProblem elliptic;
    elliptic.domain = DomainSpec::free_space(3);
    elliptic.pde_class = PdeClass::Elliptic;
    elliptic.f = ScalarField::function(bump).with_support_radius(1.0);
    const double via_elliptic = solve_elliptic(elliptic, x, quad);
    res.discrepancy = std::abs(via_wave - via_elliptic) / std::abs(via_elliptic);

    // Mollifier pairing error ratio: error(w)/error(w/2) -> 4.
    auto pairing_error = [](double w) {
        auto f = [w](double u) {
            return hyperbolic_I(4, u, w) * std::exp(-0.5 * u * u);
        };
        const double lim = 1.0 + 10.0 * w;
        const double pairing = integrate(f, -lim, lim, 1e-13).value;
        return std::abs(pairing - 2.0);
    };
    const double e1 = pairing_error(0.1);
    const double e2 = pairing_error(0.05);
    const double e3 = pairing_error(0.025);
    const double r1 = e1 / e2, r2 = e2 / e3;
    const double ratio_dev = std::max(std::abs(r1 - 4.0), std::abs(r2 - 4.0));
    res.detail = "static rel " + fmt(res.discrepancy) + "; ratios " + fmt(r1) + ", " + fmt(r2) +
                 " (4 +- 0.8)";
    res.pass = res.discrepancy <= res.threshold && ratio_dev <= 0.8;
    return res;
}

// ---------------------------------------------------------------------------
// 13. Quadrant boundary-kernel adjudication against the MC oracle
// ---------------------------------------------------------------------------
CriterionResult c13_quadrant_adjudication(const Options& options) {
    CriterionResult res{13, "quadrant kernel normalization vs WoS oracle", false, 0.0, 1.0, true, {}};
    const DomainSpec quadrant = DomainSpec::quadrant();
    const Point start{1.0, 1.0};
    const std::int64_t n_walks = options.suite == Suite::Full ? 100'000 : 20'000;
    const std::vector<Point> exits =
        mc::wos_exit_points(quadrant, start, 1e-6, n_walks, options.seed + 13, options.threads);

    // Bins: per segment, s in [0,0.25), ..., [2.75,3), [3,inf).
    constexpr int kBinsPerSegment = 13;
    const double bin_width = 0.25;
    std::vector<std::int64_t> counts(2 * kBinsPerSegment, 0);
    std::int64_t corner_hits = 0;
    for (const Point& p : exits) {
        const bool on_x_axis = p[1] == 0.0;
        const bool on_y_axis = p[0] == 0.0;
        if (on_x_axis && on_y_axis) {
            ++corner_hits;
            continue;
        }
        const double s = on_x_axis ? p[0] : p[1];
        int bin = std::min(kBinsPerSegment - 1, static_cast<int>(s / bin_width));
        counts[static_cast<std::size_t>((on_x_axis ? 0 : kBinsPerSegment) + bin)] += 1;
    }

    // Mode masses per bin.  Printed: N1/pi / ((s-x1)^2 + x2^2) integrates to
    // (N1/(pi x2)) atan((s-x1)/x2); each segment carries total 1/(2 pi).
    // Unit-total rescales jointly by pi.  The flux reference is the harmonic
    // measure read off the quadrant Green function's normal derivative.
    const double x1 = start[0], x2 = start[1];
    const double n1 = x2 / (2.0 * (std::atan(x1 / x2) + kPi / 2.0));
    auto printed_mass_x = [&](double a, double b) {
        return n1 / (kPi * x2) * (std::atan((b - x1) / x2) - std::atan((a - x1) / x2));
    };
    auto flux_mass_x = [&](double a, double b) {
        auto prim = [&](double s) { return std::atan((s - x1) / x2) - std::atan((s + x1) / x2); };
        return (prim(b) - prim(a)) / kPi;
    };

    std::ostringstream table;
    table << "bin            observed   printed    unit-total flux-ref   z(printed) z(unit) z(flux)\n";
    double z_max_printed = 0.0, z_max_unit = 0.0, z_max_flux = 0.0;
    double z_seg_printed = 0.0, z_seg_unit = 0.0;
    for (int seg = 0; seg < 2; ++seg) {
        std::int64_t seg_obs = 0;
        double seg_printed = 0.0, seg_unit = 0.0;
        for (int b = 0; b < kBinsPerSegment; ++b) {
            const double a = b * bin_width;
            const double bhi = (b == kBinsPerSegment - 1) ? 1e9 : (b + 1) * bin_width;
            // start is symmetric, so both segments share the same masses
            const double p_printed = printed_mass_x(a, bhi);
            const double p_unit = kPi * p_printed;
            const double p_flux = flux_mass_x(a, bhi);
            const std::int64_t obs = counts[static_cast<std::size_t>(seg * kBinsPerSegment + b)];
            auto zscore = [&](double p) {
                const double mu = static_cast<double>(n_walks) * p;
                const double sd = std::sqrt(static_cast<double>(n_walks) * p * (1.0 - p));
                return (static_cast<double>(obs) - mu) / sd;
            };
            const double zp = zscore(p_printed), zu = zscore(p_unit), zf = zscore(p_flux);
            z_max_printed = std::max(z_max_printed, std::abs(zp));
            z_max_unit = std::max(z_max_unit, std::abs(zu));
            z_max_flux = std::max(z_max_flux, std::abs(zf));
            seg_obs += obs;
            seg_printed += p_printed;
            seg_unit += p_unit;
            char line[160];
            std::snprintf(line, sizeof(line),
                          "seg%d[%4.2f,%4.2f) %-10lld %-10.4f %-10.4f %-10.4f %-+9.2f %-+8.2f %-+8.2f\n",
                          seg + 1, a, (b == kBinsPerSegment - 1) ? 99.0 : bhi,
                          static_cast<long long>(obs), static_cast<double>(n_walks) * p_printed,
                          static_cast<double>(n_walks) * p_unit, static_cast<double>(n_walks) * p_flux,
                          zp, zu, zf);
            table << line;
        }
        auto seg_z = [&](double p) {
            const double mu = static_cast<double>(n_walks) * p;
            const double sd = std::sqrt(static_cast<double>(n_walks) * p * (1.0 - p));
            return std::abs((static_cast<double>(seg_obs) - mu) / sd);
        };
        z_seg_printed = std::max(z_seg_printed, seg_z(seg_printed));
        z_seg_unit = std::max(z_seg_unit, seg_z(seg_unit));
    }
    table << "segment totals: |z| printed " << fmt(z_seg_printed) << ", unit-total "
          << fmt(z_seg_unit) << "\n";
    table << "verdict: segment totals match "
          << (z_seg_unit < 3.0 ? "unit-total" : (z_seg_printed < 3.0 ? "as-printed" : "neither"))
          << " at 3 sigma; fine bins: printed "
          << (z_max_printed < 3.0 ? "match" : "mismatch") << ", unit-total "
          << (z_max_unit < 3.0 ? "match" : "mismatch") << ", flux reference "
          << (z_max_flux < 3.0 ? "match" : "mismatch") << "\n";
    table << "corner hits: " << corner_hits;
    res.detail = table.str();
    // This criterion passes when the comparison runs and the table is
    // emitted; the MC sample itself is validated against the flux reference.
    res.discrepancy = z_max_flux;
    res.threshold = 3.0;
    res.pass = (corner_hits + std::accumulate(counts.begin(), counts.end(), std::int64_t{0})) ==
                   n_walks &&
               z_max_flux < 3.0;
    return res;
}

// ---------------------------------------------------------------------------
// 14. Quadrant Green arithmetic
// ---------------------------------------------------------------------------
CriterionResult c14_quadrant_green(const Options& options) {
    CriterionResult res{14, "quadrant Green value and boundary zeros", false, 0.0, 1e-12, true, {}};
    const DomainSpec quadrant = DomainSpec::quadrant();
    const double value =
        domain_green(quadrant, BoundaryCondition::Dirichlet, Point{1.0, 1.0}, Point{2.0, 1.0}, 1e-12);
    res.discrepancy = std::abs(value - std::log(45.0 / 13.0));
    RandomStream rng(options.seed, 0x1400);
    for (int k = 0; k < 20; ++k) {
        const Point x{rand_in(rng, 0.3, 2.0), rand_in(rng, 0.3, 2.0)};
        const double s = rand_in(rng, 0.0, 3.0);
        const Point xb = (k % 2 == 0) ? Point{s, 0.0} : Point{0.0, s};
        // boundary point as either argument
        res.discrepancy = std::max(
            res.discrepancy, std::abs(domain_green(quadrant, BoundaryCondition::Dirichlet, x, xb, 1e-12)));
        res.discrepancy = std::max(
            res.discrepancy, std::abs(domain_green(quadrant, BoundaryCondition::Dirichlet, xb, x, 1e-12)));
    }
    res.pass = res.discrepancy <= res.threshold;
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& options) {
    using Criterion = CriterionResult (*)(const Options&);
    const Criterion criteria[] = {c01_free_elliptic,   c02_semigroup,
                                  c03_harmonicity,     c04_boundary_vanishing,
                                  c05_poisson_mass,    c06_first_passage,
                                  c07_erf_solution,    c08_harmonic_measure,
                                  c09_mean_exit_time,  c10_fixed_energy,
                                  c11_strip_truncation, c12_wave,
                                  c13_quadrant_adjudication, c14_quadrant_green};
    std::vector<CriterionResult> results;
    int id = 0;
    for (Criterion criterion : criteria) {
        ++id;
        try {
            results.push_back(criterion(options));
        } catch (const std::exception& e) {
            CriterionResult failed;
            failed.id = id;
            failed.name = "criterion aborted";
            failed.pass = false;
            failed.detail = e.what();
            results.push_back(failed);
        }
    }
    return results;
}

int print_report(const std::vector<CriterionResult>& results, std::ostream& out) {
    int failures = 0;
    for (const CriterionResult& r : results) {
        char head[160];
        std::snprintf(head, sizeof(head), "[%2d/14] %s  %-44s  measured=%s threshold=%s time=%s",
                      r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), fmt(r.discrepancy).c_str(),
                      fmt(r.threshold).c_str(), r.time_ok ? "ok" : "over");
        out << head << "\n";
        if (!r.detail.empty()) {
            std::istringstream lines(r.detail);
            std::string line;
            while (std::getline(lines, line)) out << "        | " << line << "\n";
        }
        if (!r.pass) ++failures;
    }
    out << "summary: " << (results.size() - static_cast<std::size_t>(failures)) << "/"
        << results.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace greenpath::verify
