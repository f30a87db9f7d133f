#include "greenpath/solver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "greenpath/quadrature.hpp"

namespace greenpath {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double support_radius_or_fail(const ScalarField& field, const char* name) {
    if (field.is_zero()) return 0.0;
    if (!field.support_radius())
        fail(std::string("solve: field '") + name + "' needs a declared support radius");
    return *field.support_radius();
}

// ---------------------------------------------------------------------------
// Elliptic: ball
// ---------------------------------------------------------------------------

// Boundary term on the ball in a polar chart aligned with x: the Poisson
// kernel depends on the polar angle only, and every chart ingredient is
// analytic in (theta, alpha) so the adaptive cubature converges cleanly even
// for evaluation points close to the sphere.
double ball_boundary_term(const BoundaryValueProblem& bvp, const Point& x,
                          const QuadratureSpec& quad) {
    const double R = bvp.domain.radius;
    const double rho = x.norm();
    const double tol = quad.target_tol;

    // Orthonormal frame with e1 along x (any frame for x at the center).
    Point e1(3), e2(3), e3(3);
    if (rho > 1e-14) {
        for (int i = 0; i < 3; ++i) e1[i] = x[i] / rho;
    } else {
        e1 = Point{1.0, 0.0, 0.0};
    }
    int smallest = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(e1[i]) < std::abs(e1[smallest])) smallest = i;
    Point axis(3);
    axis[smallest] = 1.0;
    // e2 = normalize(axis x e1), e3 = e1 x e2
    e2[0] = axis[1] * e1[2] - axis[2] * e1[1];
    e2[1] = axis[2] * e1[0] - axis[0] * e1[2];
    e2[2] = axis[0] * e1[1] - axis[1] * e1[0];
    const double e2n = e2.norm();
    for (int i = 0; i < 3; ++i) e2[i] /= e2n;
    e3[0] = e1[1] * e2[2] - e1[2] * e2[1];
    e3[1] = e1[2] * e2[0] - e1[0] * e2[2];
    e3[2] = e1[0] * e2[1] - e1[1] * e2[0];

    const double coeff = std::tgamma(1.5) / (2.0 * std::pow(kPi, 1.5));  // = 1/(4 pi)
    auto f = [&](double theta, double alpha) {
        const double c = std::cos(theta), s = std::sin(theta);
        Point y(3);
        for (int i = 0; i < 3; ++i)
            y[i] = R * (c * e1[i] + s * (std::cos(alpha) * e2[i] + std::sin(alpha) * e3[i]));
        const double dist2 = R * R + rho * rho - 2.0 * R * rho * c;
        const double kernel = coeff * (R * R - rho * rho) / (R * dist2 * std::sqrt(dist2));
        return kernel * bvp.phi(y) * R * R * s;
    };
    return integrate2d(f, 0.0, kPi, 0.0, 2.0 * kPi, tol, 0.0, quad.max_evals).value;
}

// Source term on the ball in spherical coordinates centered at the
// evaluation point; the r^2 Jacobian absorbs the 1/r kernel singularity.
double ball_source_term(const BoundaryValueProblem& bvp, const Point& x,
                        const QuadratureSpec& quad) {
    const double R = bvp.domain.radius;
    const double rho2 = x.norm_sq();
    const int radial_order = 32;
    const GaussRule& radial = gauss_legendre(radial_order);

    auto f = [&](double theta, double alpha) {
        const double st = std::sin(theta);
        const Point omega{st * std::cos(alpha), st * std::sin(alpha), std::cos(theta)};
        double x_dot_omega = 0.0;
        for (int i = 0; i < 3; ++i) x_dot_omega += x[i] * omega[i];
        const double r_max = -x_dot_omega + std::sqrt(x_dot_omega * x_dot_omega + R * R - rho2);
        double sum = 0.0;
        for (int k = 0; k < radial_order; ++k) {
            const double r = 0.5 * r_max * (1.0 + radial.nodes[static_cast<std::size_t>(k)]);
            const double w = 0.5 * r_max * radial.weights[static_cast<std::size_t>(k)];
            Point y = x;
            for (int i = 0; i < 3; ++i) y[i] += r * omega[i];
            // K(x,y) r^2 = r - r^2 / image_dist
            double dot = 0.0;
            for (int i = 0; i < 3; ++i) dot += x[i] * y[i];
            const double q = std::sqrt(rho2) * y.norm() / R;
            const double image_dist = std::sqrt(q * q - 2.0 * dot + R * R);
            sum += w * (r - r * r / image_dist) * bvp.f(y);
        }
        return sum * st;
    };
    return integrate2d(f, 0.0, kPi, 0.0, 2.0 * kPi, quad.target_tol, 0.0, quad.max_evals).value;
}

// Free-space source term in polar/spherical coordinates about the
// evaluation point (n = 2 or 3).
double free_source_term(const BoundaryValueProblem& bvp, const Point& x,
                        const QuadratureSpec& quad) {
    const int n = bvp.domain.n;
    const double rs = support_radius_or_fail(bvp.f, "f");
    const double r_max = rs + x.norm();
    if (r_max == 0.0) return 0.0;
    if (n == 3) {
        auto f = [&](double theta, double alpha) {
            const double st = std::sin(theta);
            const Point omega{st * std::cos(alpha), st * std::sin(alpha), std::cos(theta)};
            const GaussRule& radial = gauss_legendre(48);
            double sum = 0.0;
            for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
                const double r = 0.5 * r_max * (1.0 + radial.nodes[k]);
                const double w = 0.5 * r_max * radial.weights[k];
                Point y = x;
                for (int i = 0; i < 3; ++i) y[i] += r * omega[i];
                sum += w * r * bvp.f(y);  // K r^2 = r
            }
            return sum * st;
        };
        return integrate2d(f, 0.0, kPi, 0.0, 2.0 * kPi, quad.target_tol, 0.0, quad.max_evals).value;
    }
    if (n == 2) {
        auto f = [&](double r, double alpha) {
            if (r <= 0.0) return 0.0;
            const Point y{x[0] + r * std::cos(alpha), x[1] + r * std::sin(alpha)};
            return -2.0 * std::log(r) * r * bvp.f(y);
        };
        return integrate2d(f, 0.0, r_max, 0.0, 2.0 * kPi, quad.target_tol, 0.0, quad.max_evals).value;
    }
    fail("solve_elliptic: free-space source term implemented for n in {2,3}");
}

// Quadrant boundary term; the substitution s = x^1 + x^2 tan(theta) turns
// each segment kernel into a constant times d(theta).
double quadrant_boundary_term(const BoundaryValueProblem& bvp, const Point& x,
                              const QuadratureSpec& quad) {
    const double scale = (bvp.quadrant_mode == QuadrantNormalization::UnitTotalMass) ? kPi : 1.0;
    const double tol = quad.target_tol;
    // Segment along the x^1 axis.
    const double n1 = x[1] / (2.0 * (std::atan(x[0] / x[1]) + kPi / 2.0));
    auto seg1 = [&](double theta) {
        const double s = x[0] + x[1] * std::tan(theta);
        return bvp.phi(Point{s, 0.0});
    };
    const double u1 = scale * n1 / (kPi * x[1]) *
                      integrate(seg1, -std::atan(x[0] / x[1]), kPi / 2.0, tol, 0.0, quad.max_evals).value;
    // Segment along the x^2 axis.
    const double n2 = x[0] / (2.0 * (std::atan(x[1] / x[0]) + kPi / 2.0));
    auto seg2 = [&](double theta) {
        const double s = x[1] + x[0] * std::tan(theta);
        return bvp.phi(Point{0.0, s});
    };
    const double u2 = scale * n2 / (kPi * x[0]) *
                      integrate(seg2, -std::atan(x[1] / x[0]), kPi / 2.0, tol, 0.0, quad.max_evals).value;
    return u1 + u2;
}

// ---------------------------------------------------------------------------
// Parabolic terms
// ---------------------------------------------------------------------------

// Gaussian average of a field at spatial scale sqrt(tau) about x:
//   int K_C(x, tau, y) g(y, t_field) dy  with unit-mass K_C.
double gaussian_average(const ScalarField& g, const Point& x, double tau, double t_field,
                        const QuadratureSpec& quad) {
    const int n = x.dim();
    if (tau <= 0.0) return g(x, t_field);
    const double width = 3.7;  // exp(-pi*3.7^2) ~ 2e-19
    const double h = std::sqrt(tau);
    if (n == 1) {
        auto f = [&](double v) {
            Point y{x[0] + h * v};
            return std::exp(-kPi * v * v) * g(y, t_field);
        };
        return integrate(f, -width, width, quad.target_tol, 0.0, quad.max_evals).value;
    }
    if (n > 3) fail("solve_parabolic: free-space quadrature implemented for n <= 3");
    std::vector<double> lo(static_cast<std::size_t>(n), -width), hi(static_cast<std::size_t>(n), width);
    auto f = [&](std::span<const double> v) {
        Point y = x;
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] += h * v[static_cast<std::size_t>(i)];
            e += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        return std::exp(-kPi * e) * g(y, t_field);
    };
    return tensor_gauss(f, lo, hi, 48);
}

// Half-space (n=1) Dirichlet heat kernel applied to Cauchy data.
double halfspace_cauchy_term(const BoundaryValueProblem& bvp, const SpaceTimePoint& at,
                             const QuadratureSpec& quad) {
    const double x = at.space[0];
    const double t = at.time;
    double upper = x + 7.0 * std::sqrt(t / (2.0 * kPi));
    if (auto rs = bvp.psi.support_radius()) upper = std::min(upper, *rs);
    if (upper <= 0.0) return 0.0;
    auto f = [&](double y) {
        const double direct = std::exp(-kPi * (y - x) * (y - x) / t);
        const double mirror = std::exp(-kPi * (y + x) * (y + x) / t);
        return std::pow(t, -0.5) * (direct - mirror) * bvp.psi(Point{y}, 0.0);
    };
    return integrate(f, 0.0, upper, quad.target_tol, 0.0, quad.max_evals).value;
}

// Half-space (n=1) boundary term with the sigma = x sqrt(pi/dt)
// substitution, under which K_d ddt = (2/sqrt(pi)) e^{-sigma^2} dsigma.
double halfspace_boundary_term(const BoundaryValueProblem& bvp, const SpaceTimePoint& at,
                               const QuadratureSpec& quad) {
    const double x = at.space[0];
    const double t = at.time;
    if (x <= 0.0) return bvp.phi(Point{0.0}, t);  // on the wall
    const double sigma_lo = x * std::sqrt(kPi / t);
    const double sigma_hi = std::max(sigma_lo + 1.0, 6.5);  // e^{-6.5^2} ~ 4.5e-19
    auto f = [&](double sigma) {
        const double dt = kPi * x * x / (sigma * sigma);
        return (2.0 / std::sqrt(kPi)) * std::exp(-sigma * sigma) * bvp.phi(Point{0.0}, t - dt);
    };
    return integrate(f, sigma_lo, sigma_hi, quad.target_tol, 0.0, quad.max_evals).value;
}

double halfspace_source_term(const BoundaryValueProblem& bvp, const SpaceTimePoint& at,
                             const QuadratureSpec& quad) {
    if (bvp.f.is_zero()) return 0.0;
    const double x = at.space[0];
    const double t = at.time;
    const double inner_tol = quad.target_tol / std::max(1.0, t);
    auto outer = [&](double tau) {
        if (tau <= 0.0) return bvp.f(Point{x}, t);
        double upper = x + 7.0 * std::sqrt(tau / (2.0 * kPi));
        if (auto rs = bvp.f.support_radius()) upper = std::min(upper, *rs);
        if (upper <= 0.0) return 0.0;
        auto inner = [&](double y) {
            const double direct = std::exp(-kPi * (y - x) * (y - x) / tau);
            const double mirror = std::exp(-kPi * (y + x) * (y + x) / tau);
            return std::pow(tau, -0.5) * (direct - mirror) * bvp.f(Point{y}, t - tau);
        };
        return integrate(inner, 0.0, upper, inner_tol, 0.0, quad.max_evals).value;
    };
    return integrate(outer, 0.0, t, quad.target_tol, 0.0, quad.max_evals).value;
}

double free_parabolic_source_term(const BoundaryValueProblem& bvp, const SpaceTimePoint& at,
                                  const QuadratureSpec& quad) {
    if (bvp.f.is_zero()) return 0.0;
    const double t = at.time;
    QuadratureSpec inner = quad;
    inner.target_tol = quad.target_tol / std::max(1.0, t);
    auto outer = [&](double tau) { return gaussian_average(bvp.f, at.space, tau, t - tau, inner); };
    return integrate(outer, 0.0, t, quad.target_tol, 0.0, quad.max_evals).value;
}

// ---------------------------------------------------------------------------
// Wave terms
// ---------------------------------------------------------------------------

double sphere_mean(const std::function<double(const Point&)>& g, const Point& x, double radius,
                   double tol, long max_evals) {
    // (1/4pi) int_{S^2} g(x + radius*omega) dOmega in the polar chart.
    auto f = [&](double theta, double alpha) {
        const double st = std::sin(theta);
        Point y = x;
        y[0] += radius * st * std::cos(alpha);
        y[1] += radius * st * std::sin(alpha);
        y[2] += radius * std::cos(theta);
        return g(y) * st;
    };
    return integrate2d(f, 0.0, kPi, 0.0, 2.0 * kPi, tol, 0.0, max_evals).value / (4.0 * kPi);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(target_tol > 0.0)) fail("QuadratureSpec: target_tol must be positive");
    if (max_evals < 10) fail("QuadratureSpec: max_evals must be at least 10");
}

void BoundaryValueProblem::validate() const {
    switch (pde_class) {
        case PdeClass::Elliptic:
            if (!psi.is_zero() || !psi_t.is_zero())
                fail("elliptic problems do not take Cauchy data");
            break;
        case PdeClass::Parabolic:
            if (!psi_t.is_zero()) fail("parabolic problems do not take d(psi)/dt data");
            break;
        case PdeClass::Hyperbolic:
            if (kcase != KernelCase::Imaginary)
                fail("hyperbolic problems admit s = i only");
            break;
    }
}

double solve_elliptic(const BoundaryValueProblem& bvp, const Point& eval_at,
                      const QuadratureSpec& quad) {
    bvp.validate();
    quad.validate();
    if (bvp.pde_class != PdeClass::Elliptic) fail("solve_elliptic: problem class is not elliptic");
    if (!contains(bvp.domain, eval_at)) fail("solve_elliptic: evaluation point outside the domain");
    switch (bvp.domain.kind) {
        case DomainKind::BallInterior: {
            if (bvp.domain.n != 3 || bvp.bc != BoundaryCondition::Dirichlet)
                fail("solve_elliptic: ball solver supports n = 3 Dirichlet");
            double u = 0.0;
            if (!bvp.phi.is_zero()) u += ball_boundary_term(bvp, eval_at, quad);
            if (!bvp.f.is_zero()) u += ball_source_term(bvp, eval_at, quad);
            return u;
        }
        case DomainKind::FreeSpace: {
            if (!bvp.phi.is_zero()) fail("solve_elliptic: free space has no boundary data");
            if (bvp.f.is_zero()) return 0.0;
            return free_source_term(bvp, eval_at, quad);
        }
        case DomainKind::Quadrant: {
            if (bvp.bc != BoundaryCondition::Dirichlet)
                fail("solve_elliptic: quadrant supports Dirichlet only");
            if (!bvp.f.is_zero())
                fail("solve_elliptic: quadrant source integrals not supported (boundary data only)");
            if (eval_at[0] <= 0.0 || eval_at[1] <= 0.0)
                fail("solve_elliptic: evaluation point must be strictly interior");
            return quadrant_boundary_term(bvp, eval_at, quad);
        }
        default:
            fail("solve_elliptic: unsupported domain " + bvp.domain.to_string());
    }
}

double solve_parabolic(const BoundaryValueProblem& bvp, const SpaceTimePoint& eval_at,
                       const QuadratureSpec& quad) {
    bvp.validate();
    quad.validate();
    if (bvp.pde_class != PdeClass::Parabolic) fail("solve_parabolic: problem class is not parabolic");
    if (bvp.kcase != KernelCase::Real) fail("solve_parabolic: s = i not supported by the solver");
    if (!(eval_at.time > 0.0)) fail("solve_parabolic: evaluation time must be positive");
    if (!contains(bvp.domain, eval_at.space))
        fail("solve_parabolic: evaluation point outside the domain");
    switch (bvp.domain.kind) {
        case DomainKind::FreeSpace: {
            double u = 0.0;
            if (!bvp.psi.is_zero())
                u += gaussian_average(bvp.psi, eval_at.space, eval_at.time, 0.0, quad);
            u += free_parabolic_source_term(bvp, eval_at, quad);
            return u;
        }
        case DomainKind::HalfSpace: {
            if (bvp.domain.n != 1) fail("solve_parabolic: half-space solver supports n = 1");
            if (bvp.bc != BoundaryCondition::Dirichlet)
                fail("solve_parabolic: no Neumann kernels on this domain");
            double u = 0.0;
            if (!bvp.phi.is_zero()) u += halfspace_boundary_term(bvp, eval_at, quad);
            if (!bvp.psi.is_zero()) u += halfspace_cauchy_term(bvp, eval_at, quad);
            u += halfspace_source_term(bvp, eval_at, quad);
            return u;
        }
        default:
            fail("solve_parabolic: unsupported domain " + bvp.domain.to_string());
    }
}

double solve_wave_retarded(const BoundaryValueProblem& bvp, const SpaceTimePoint& eval_at,
                           const QuadratureSpec& quad, WaveBranch branch) {
    bvp.validate();
    quad.validate();
    if (bvp.pde_class != PdeClass::Hyperbolic) fail("solve_wave_retarded: problem class is not hyperbolic");
    if (bvp.domain.kind != DomainKind::FreeSpace || bvp.domain.n != 3)
        fail("solve_wave_retarded: supported on FreeSpace(3)");
    const double t = eval_at.time;
    const Point& x = eval_at.space;
    const double time_sign = (branch == WaveBranch::Retarded) ? -1.0 : 1.0;

    double u = 0.0;

    // Cauchy terms: Psi = M_t psi + t M_t(omega . grad psi) + t M_t psi_t,
    // where M_t is the mean over the sphere of radius t.
    if (!bvp.psi.is_zero() || !bvp.psi_t.is_zero()) {
        support_radius_or_fail(bvp.psi, "psi");
        support_radius_or_fail(bvp.psi_t, "psi_t");
        const double tol = quad.target_tol;
        if (!bvp.psi.is_zero()) {
            auto psi0 = [&](const Point& y) { return bvp.psi(y, 0.0); };
            u += sphere_mean(psi0, x, t, tol, quad.max_evals);
            const double h = 1e-5;
            auto radial_grad = [&](const Point& y) {
                double g = 0.0;
                for (int i = 0; i < 3; ++i) {
                    Point yp = y, ym = y;
                    yp[i] += h;
                    ym[i] -= h;
                    g += (bvp.psi(yp, 0.0) - bvp.psi(ym, 0.0)) / (2.0 * h) * (y[i] - x[i]);
                }
                return g / t;  // omega = (y - x)/t
            };
            u += t * sphere_mean(radial_grad, x, t, tol, quad.max_evals);
        }
        if (!bvp.psi_t.is_zero()) {
            // The advanced branch is the time reversal of the retarded
            // evaluation, which flips the sign of the psi_t contribution.
            const double psit_sign = (branch == WaveBranch::Retarded) ? 1.0 : -1.0;
            auto psit0 = [&](const Point& y) { return bvp.psi_t(y, 0.0); };
            u += psit_sign * t * sphere_mean(psit0, x, t, tol, quad.max_evals);
        }
    }

    // Source term: retarded potential int f(y, t - |x-y|)/|x-y| dy.
    if (!bvp.f.is_zero()) {
        const double rs = support_radius_or_fail(bvp.f, "f");
        const double r_max = std::min(t, x.norm() + rs);
        if (r_max > 0.0) {
            const double inner_tol = quad.target_tol / std::max(1.0, r_max);
            auto shell = [&](double r) {
                auto fr = [&](const Point& y) { return bvp.f(y, t + time_sign * r); };
                // int_{S^2} f r dOmega = 4 pi r * mean
                return 4.0 * kPi * r * sphere_mean(fr, x, r, inner_tol, quad.max_evals);
            };
            u += integrate(shell, 0.0, r_max, quad.target_tol, 0.0, quad.max_evals).value;
        }
    }
    return u;
}

double sphere_integral(const DomainSpec& ball, const std::function<double(const Point&)>& fn,
                       double tol, double z_lo, double z_hi, double az_lo, double az_hi) {
    if (!ball.is_ball() || ball.n != 3) fail("sphere_integral: needs a ball domain with n = 3");
    const double R = ball.radius;
    if (az_lo == 0.0 && az_hi == 0.0) az_hi = 2.0 * kPi;
    // Polar chart: the z-band [z_lo, z_hi] maps to theta in [acos(z_hi), acos(z_lo)].
    const double th_lo = std::acos(std::clamp(z_hi, -1.0, 1.0));
    const double th_hi = std::acos(std::clamp(z_lo, -1.0, 1.0));
    auto f = [&](double theta, double alpha) {
        const double st = std::sin(theta);
        const Point y{R * st * std::cos(alpha), R * st * std::sin(alpha), R * std::cos(theta)};
        return fn(y) * R * R * st;
    };
    return integrate2d(f, th_lo, th_hi, az_lo, az_hi, tol).value;
}

}  // namespace greenpath
