#pragma once

#include "greenpath/fields.hpp"
#include "greenpath/geometry.hpp"
#include "greenpath/kernels.hpp"

namespace greenpath {

enum class PdeClass { Elliptic, Parabolic, Hyperbolic };

struct QuadratureSpec {
    enum class Method { Auto, Adaptive1D, TensorGauss, SphereCubature };
    Method method = Method::Auto;
    double target_tol = 1e-8;
    long max_evals = 4'000'000;

    void validate() const;
};

// Domain + data of a boundary-value problem.  The class decides which data
// fields are consumed: elliptic uses (f, phi), parabolic (f, phi, psi),
// hyperbolic (f, psi, psi_t) with s = i.
struct BoundaryValueProblem {
    DomainSpec domain;
    PdeClass pde_class = PdeClass::Elliptic;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    KernelCase kcase = KernelCase::Real;
    ScalarField f;      // source
    ScalarField phi;    // boundary data
    ScalarField psi;    // Cauchy data
    ScalarField psi_t;  // time derivative of the Cauchy data (hyperbolic)
    QuadrantNormalization quadrant_mode = QuadrantNormalization::AsPrinted;

    void validate() const;
};

// Superposition solution of the elliptic problem:
//   Psi(x) = int_U K_U(x,x') f(x') dx' + int_dU K_d(x,x_B) phi(x_B) dS.
// Supported: Ball(3,R) interior (full), FreeSpace n in {2,3} (source only),
// Quadrant (boundary data only).
double solve_elliptic(const BoundaryValueProblem& bvp, const Point& eval_at,
                      const QuadratureSpec& quad);

// Three-term parabolic solution (source + boundary + Cauchy integrals).
// Supported: FreeSpace n <= 3, HalfSpace(1), Dirichlet, s = 1.
double solve_parabolic(const BoundaryValueProblem& bvp, const SpaceTimePoint& eval_at,
                       const QuadratureSpec& quad);

enum class WaveBranch { Retarded, Advanced };

// 3+1 wave solution: retarded potential of the source plus the spherical
// means carried by the half-weighted Cauchy kernels.  All data must be
// compactly supported (ScalarField::support_radius).
double solve_wave_retarded(const BoundaryValueProblem& bvp, const SpaceTimePoint& eval_at,
                           const QuadratureSpec& quad, WaveBranch branch = WaveBranch::Retarded);

// Integral of fn over the boundary sphere of a ball domain (adaptive in the
// (cos theta, azimuth) chart).  Exposed for the Poisson-kernel mass checks
// and the harmonic-measure patch comparisons.
double sphere_integral(const DomainSpec& ball, const std::function<double(const Point&)>& fn,
                       double tol, double z_lo = -1.0, double z_hi = 1.0, double az_lo = 0.0,
                       double az_hi = 0.0 /* 0,0 = full circle */);

}  // namespace greenpath
