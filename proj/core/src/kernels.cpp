#include "greenpath/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "greenpath/quadrature.hpp"

namespace greenpath {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_point(const DomainSpec& domain, const Point& p, const char* what) {
    // Closed-region membership, absorbing rounding noise on the boundary.
    if (!contains(domain, p) && !on_boundary(domain, p))
        fail(std::string(what) + " outside " + domain.to_string());
}

// Radial profile of the free elliptic kernel as a function of squared
// distance (saves a sqrt in the image loops for n = 3).
double free_elliptic_r2(int n, double r2) {
    if (n == 2) return -std::log(r2);  // -2 ln r
    if (n == 3) return 1.0 / std::sqrt(r2);
    static thread_local int cached_n = 0;
    static thread_local double cached_coeff = 0.0;
    if (cached_n != n) {
        cached_coeff = std::pow(kPi, 1.0 - 0.5 * n) * std::tgamma(0.5 * n - 1.0);
        cached_n = n;
    }
    return cached_coeff * std::pow(r2, 0.5 * (2.0 - n));
}

double sum_sq_except(const Point& a, const Point& b, int skip_axis) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        if (i == skip_axis) continue;
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Dirichlet/Neumann 1D strip image factor for the heat kernel on [0,1]
// (without the dt^{-1/2} prefactor):
//   sum_m e^{-pi (zp - z - 2m)^2/dt}  -+  e^{-pi (zp + z - 2m)^2/dt}.
double strip_heat_factor_1d(double z, double zp, double dt, BoundaryCondition bc, int order) {
    const double w = (bc == BoundaryCondition::Dirichlet) ? -1.0 : 1.0;
    const double a = zp - z;
    const double b = zp + z;
    auto g = [dt](double u) { return std::exp(-kPi * u * u / dt); };
    double sum = g(a) + w * g(b);
    for (int m = 1; m <= order; ++m) {
        sum += g(a - 2.0 * m) + g(a + 2.0 * m) + w * (g(b - 2.0 * m) + g(b + 2.0 * m));
    }
    return sum;
}

int heat_axis_order(double dt, double tol_axis) {
    // Certified by the same majorant as covering::certified_tail: omitted
    // per-axis images with |shift| = j > M contribute at most
    // 4 exp(-pi (2j-2)^2/dt) in total.
    int M = 1;
    while (certified_tail(DomainSpec::unit_strip(1), EquationClass::Parabolic, dt, M) >= tol_axis &&
           M < 4096)
        ++M;
    return M;
}

double strip_green_direct(const DomainSpec& domain, BoundaryCondition bc, const Point& x,
                          const Point& xp, double tol) {
    const int n = domain.n;
    if (bc == BoundaryCondition::Neumann)
        fail("domain_green: the Neumann image series diverges on the strip (no elliptic Neumann kernel)");
    const int axis = n - 1;
    const double rho2 = sum_sq_except(x, xp, axis);
    const double z = x[axis];
    const double zp = xp[axis];
    const double a = zp - z;
    const double b = zp + z;
    const int order = truncation_order(domain, EquationClass::Elliptic, x.dist(xp), tol);
    auto g = [&](double dz) { return free_elliptic_r2(n, rho2 + dz * dz); };
    // Shell-by-shell summation: each shell is a reflection quadrupole, so
    // the partial sums converge absolutely (O(m^-2) shells for n = 3).
    double sum = g(a) - g(b);
    for (int m = 1; m <= order; ++m) {
        const double two_m = 2.0 * m;
        sum += g(a - two_m) + g(a + two_m) - g(b - two_m) - g(b + two_m);
    }
    return sum;
}

// Heat kernel of strip/box via per-axis 1D image factors (the Dirichlet box
// heat kernel is the exact product of 1D strip kernels).
double heat_kernel_images(const DomainSpec& domain, BoundaryCondition bc, const Point& x,
                          double dt, const Point& xp, double tol) {
    const int n = domain.n;
    const double pref = std::pow(dt, -0.5 * n);
    // Per-axis absolute tolerance on the dimensionless image factors; each
    // factor is O(1) so the product error is bounded by ~n times this.
    const double axis_bound = 1.0 + 2.0 * std::sqrt(dt);
    const double tol_axis = std::max(1e-16, tol / (pref * 8.0 * n * std::pow(axis_bound, n - 1)));
    const int order = heat_axis_order(dt, tol_axis);

    if (domain.kind == DomainKind::UnitStrip) {
        const int axis = n - 1;
        const double rho2 = sum_sq_except(x, xp, axis);
        return pref * std::exp(-kPi * rho2 / dt) *
               strip_heat_factor_1d(x[axis], xp[axis], dt, bc, order);
    }
    // UnitBox
    double prod = pref;
    for (int i = 0; i < n; ++i) prod *= strip_heat_factor_1d(x[i], xp[i], dt, bc, order);
    return prod;
}

// Elliptic box kernel as the Laplace transform in tau of the heat kernel:
//   K(x,x') = integral_0^inf K_heat(x, tau, x') dtau.
// The integrand is the certified image sum at every tau; it vanishes like
// tau^{-n/2} e^{-pi r^2/tau} at 0 and like e^{-n pi tau / 4} at infinity
// (spectral gap of (1/4pi) Lap on the unit box).
double box_green_transform(const DomainSpec& domain, BoundaryCondition bc, const Point& x,
                           const Point& xp, double tol) {
    if (bc == BoundaryCondition::Neumann)
        fail("domain_green: the Neumann image series diverges on the box (no elliptic Neumann kernel)");
    const int n = domain.n;
    const double gap = 0.25 * n * kPi;
    const double upper = std::max(8.0, std::log(std::pow(2.2, n) * 10.0 / (gap * tol)) / gap);
    const double tol_tau = tol / (10.0 * upper);
    auto f = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        return heat_kernel_images(domain, bc, x, tau, xp, tol_tau);
    };
    const QuadratureResult res = integrate(f, 0.0, upper, 0.3 * tol, 0.0, 4000000);
    return res.value;
}

double ball_green(const DomainSpec& domain, BoundaryCondition bc, const Point& x, const Point& xp) {
    if (bc != BoundaryCondition::Dirichlet) fail("domain_green: ball supports Dirichlet only");
    if (domain.n != 3) fail("domain_green: ball kernel implemented for n = 3 only");
    const double R = domain.radius;
    // |(|x|/R) x' - R n_x|^2 expands to (|x||x'|/R)^2 - 2 x.x' + R^2, which is
    // symmetric in x <-> x' and well defined at x = 0.
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += x[i] * xp[i];
    const double q = x.norm() * xp.norm() / R;
    const double image_dist2 = q * q - 2.0 * dot + R * R;
    return 1.0 / x.dist(xp) - 1.0 / std::sqrt(image_dist2);
}

double quadrant_green(BoundaryCondition bc, const Point& x, const Point& xp) {
    if (bc != BoundaryCondition::Dirichlet) fail("domain_green: quadrant supports Dirichlet only");
    auto log_r2 = [&](double sx, double sy) {
        const double dx = xp[0] - sx * x[0];
        const double dy = xp[1] - sy * x[1];
        return std::log(dx * dx + dy * dy);  // 2 ln r
    };
    // -2 [ ln r_{++} - ln r_{-+} - ln r_{+-} + ln r_{--} ] over source images.
    return -(log_r2(1, 1) - log_r2(-1, 1) - log_r2(1, -1) + log_r2(-1, -1));
}

}  // namespace

double free_elliptic(int n, double r) {
    if (n < 2) fail("free_elliptic: n must be >= 2");
    if (!(r > 0.0)) fail("free_elliptic: r = 0 is on the singular diagonal");
    return free_elliptic_r2(n, r * r);
}

Complex free_heat(int n, double r, double dt, KernelCase kcase) {
    if (n < 1) fail("free_heat: n must be >= 1");
    if (r < 0.0) fail("free_heat: r must be >= 0");
    if (dt == 0.0 && r == 0.0) fail("free_heat: singular at dt = 0, r = 0");
    if (kcase == KernelCase::Real) {
        if (dt <= 0.0) return 0.0;  // causal support
        return std::pow(dt, -0.5 * n) * std::exp(-kPi * r * r / dt);
    }
    if (dt == 0.0) fail("free_heat: dt = 0 undefined for s = i");
    // (i dt)^{-n/2} on the principal branch is |dt|^{-n/2} e^{-i sign(dt) pi n/4};
    // exp(-pi r^2/(i dt)) = exp(i pi r^2 / dt) has unit modulus.
    const double modulus = std::pow(std::abs(dt), -0.5 * n);
    const double phase = -std::copysign(1.0, dt) * kPi * n / 4.0 + kPi * r * r / dt;
    return std::polar(modulus, phase);
}

double fixed_energy(int n, double r, double energy) {
    if (n < 1) fail("fixed_energy: n must be >= 1");
    if (!(r > 0.0)) fail("fixed_energy: r = 0 is on the singular diagonal");
    if (energy < 0.0) fail("fixed_energy: energy must be >= 0");
    if (energy == 0.0) {
        if (n <= 2) fail("fixed_energy: tau integral diverges for n <= 2 at zero energy");
        return free_elliptic(n, r);
    }
    if (n == 3) return std::exp(-2.0 * kPi * r * std::sqrt(2.0 * energy)) / r;
    auto f = [n, r, energy](double tau) {
        return std::pow(tau, -0.5 * n) * std::exp(-2.0 * kPi * energy * tau - kPi * r * r / tau);
    };
    // Split at the saddle point of the exponent.
    const double split = r / std::sqrt(2.0 * energy);
    const QuadratureResult head = integrate(f, 0.0, split, 1e-14, 1e-12);
    const QuadratureResult tail = integrate_to_inf(f, split, 1e-14, 1e-12);
    return head.value + tail.value;
}

double domain_green(const DomainSpec& domain, BoundaryCondition bc, const Point& x, const Point& xp,
                    double tol) {
    check_point(domain, x, "domain_green: x");
    check_point(domain, xp, "domain_green: x'");
    if (x.dist_sq(xp) == 0.0) fail("domain_green: x = x' is on the singular diagonal");
    if (!(tol > 0.0)) fail("domain_green: tol must be positive");
    switch (domain.kind) {
        case DomainKind::HalfSpace: {
            const int axis = domain.n - 1;
            const double rho2 = sum_sq_except(x, xp, axis);
            const double direct = xp[axis] - x[axis];
            const double mirrored = xp[axis] + x[axis];
            const double w = (bc == BoundaryCondition::Dirichlet) ? -1.0 : 1.0;
            return free_elliptic_r2(domain.n, rho2 + direct * direct) +
                   w * free_elliptic_r2(domain.n, rho2 + mirrored * mirrored);
        }
        case DomainKind::UnitStrip:
            return strip_green_direct(domain, bc, x, xp, tol);
        case DomainKind::UnitBox:
            return box_green_transform(domain, bc, x, xp, tol);
        case DomainKind::BallInterior:
        case DomainKind::BallExterior:
            return ball_green(domain, bc, x, xp);
        case DomainKind::Quadrant:
            return quadrant_green(bc, x, xp);
        default:
            fail("domain_green: unsupported domain " + domain.to_string());
    }
}

double heat_domain_kernel(const DomainSpec& domain, BoundaryCondition bc, const Point& x, double dt,
                          const Point& xp, double tol) {
    check_point(domain, x, "heat_domain_kernel: x");
    check_point(domain, xp, "heat_domain_kernel: x'");
    if (!(tol > 0.0)) fail("heat_domain_kernel: tol must be positive");
    if (dt <= 0.0) {
        if (dt == 0.0 && x.dist_sq(xp) == 0.0) fail("heat_domain_kernel: singular at dt = 0, r = 0");
        return 0.0;
    }
    switch (domain.kind) {
        case DomainKind::HalfSpace: {
            const int axis = domain.n - 1;
            const double rho2 = sum_sq_except(x, xp, axis);
            const double direct = xp[axis] - x[axis];
            const double mirrored = xp[axis] + x[axis];
            const double w = (bc == BoundaryCondition::Dirichlet) ? -1.0 : 1.0;
            return std::pow(dt, -0.5 * domain.n) *
                   (std::exp(-kPi * (rho2 + direct * direct) / dt) +
                    w * std::exp(-kPi * (rho2 + mirrored * mirrored) / dt));
        }
        case DomainKind::UnitStrip:
        case DomainKind::UnitBox:
            return heat_kernel_images(domain, bc, x, dt, xp, tol);
        default:
            fail("heat_domain_kernel: unsupported domain " + domain.to_string());
    }
}

double boundary_kernel_elliptic(const DomainSpec& domain, const Point& x, const Point& xb,
                                QuadrantNormalization mode) {
    check_point(domain, x, "boundary_kernel_elliptic: x");
    if (!on_boundary(domain, xb)) fail("boundary_kernel_elliptic: x_B not on the boundary");
    switch (domain.kind) {
        case DomainKind::BallInterior:
        case DomainKind::BallExterior: {
            const int n = domain.n;
            const double R = domain.radius;
            const double x2 = x.norm_sq();
            if (on_boundary(domain, x)) fail("boundary_kernel_elliptic: x must be strictly interior");
            const double excess =
                (domain.kind == DomainKind::BallInterior) ? (R * R - x2) : (x2 - R * R);
            const double coeff = std::tgamma(0.5 * n) / (2.0 * std::pow(kPi, 0.5 * n));
            return coeff * excess / (R * std::pow(xb.dist(x), static_cast<double>(n)));
        }
        case DomainKind::Quadrant: {
            if (x[0] <= 0.0 || x[1] <= 0.0) fail("boundary_kernel_elliptic: x must be strictly interior");
            const double scale = (mode == QuadrantNormalization::UnitTotalMass) ? kPi : 1.0;
            const bool corner = std::abs(xb[0]) <= kBoundaryTol && std::abs(xb[1]) <= kBoundaryTol;
            if (corner) return 0.0;  // N_3 = 0
            if (std::abs(xb[1]) <= kBoundaryTol) {
                const double norm = x[1] / (2.0 * (std::atan(x[0] / x[1]) + kPi / 2.0));
                const double dx = xb[0] - x[0];
                return scale * norm / (kPi * (dx * dx + x[1] * x[1]));
            }
            const double norm = x[0] / (2.0 * (std::atan(x[1] / x[0]) + kPi / 2.0));
            const double dy = xb[1] - x[1];
            return scale * norm / (kPi * (x[0] * x[0] + dy * dy));
        }
        default:
            fail("boundary_kernel_elliptic: unsupported domain " + domain.to_string());
    }
}

double boundary_kernel_parabolic(const DomainSpec& domain, const Point& x, double dt,
                                 const Point& xb) {
    if (domain.kind != DomainKind::HalfSpace)
        fail("boundary_kernel_parabolic: implemented for the half-space only");
    check_point(domain, x, "boundary_kernel_parabolic: x");
    const int axis = domain.n - 1;
    if (std::abs(xb[axis]) > kBoundaryTol)
        fail("boundary_kernel_parabolic: x_B must lie on the hyperplane x^n = 0");
    if (dt <= 0.0) return 0.0;  // causal support
    const double r2 = xb.dist_sq(x);
    return x[axis] * std::pow(dt, -(0.5 * domain.n + 1.0)) * std::exp(-kPi * r2 / dt);
}

double hyperbolic_I(int n, double u, double width) {
    if (!(width > 0.0)) fail("hyperbolic_I: mollifier width must be positive");
    if (n < 4 || n % 2 != 0)
        fail("hyperbolic_I: implemented for even n >= 4 (closed distributional forms)");
    const int deriv = n / 2 - 2;
    const double coeff = std::pow(2.0, 0.5 * n - 1.0) * std::pow(2.0 * kPi, -deriv);
    // Unit-mass Gaussian mollifier and its derivatives via probabilists'
    // Hermite polynomials: eta^(j)(u) = (-1)^j He_j(u/w) eta(u) / w^j.
    const double t = u / width;
    const double eta = std::exp(-0.5 * t * t) / (width * std::sqrt(2.0 * kPi));
    double he0 = 1.0, he1 = t;
    double he = (deriv == 0) ? he0 : he1;
    for (int j = 2; j <= deriv; ++j) {
        he = t * he1 - (j - 1) * he0;
        he0 = he1;
        he1 = he;
    }
    const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
    return coeff * sign * he * eta / std::pow(width, deriv);
}

}  // namespace greenpath
