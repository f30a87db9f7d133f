#pragma once

#include <complex>

#include "greenpath/covering.hpp"
#include "greenpath/geometry.hpp"

namespace greenpath {

using Complex = std::complex<double>;

// The paper convention is used throughout: the PDE operator carries the
// factor s^2/(4 pi) (diffusion coefficient 1/(4 pi)), the heat kernel is
// (dt)^{-n/2} exp(-pi r^2/dt), and Green functions are 4 pi times the
// textbook-normalized ones.

enum class KernelCase { Real, Imaginary };  // tau = s*tauhat with s = 1 or s = i

enum class BoundaryCondition { Dirichlet, Neumann };

// The three printed quadrant segment kernels integrate to 1/(2 pi) each over
// their segments; UnitTotalMass rescales them jointly (by pi) so the total
// boundary mass is 1.  The Monte Carlo exit-distribution comparison is the
// arbiter of which mode reproduces harmonic measure.
enum class QuadrantNormalization { AsPrinted, UnitTotalMass };

// Free-space elliptic kernel: pi^{1-n/2} Gamma(n/2-1) r^{2-n} for n != 2 and
// -2 ln r for n = 2.  Satisfies (1/4pi) Lap K = -delta.
double free_elliptic(int n, double r);

// Free-space heat/Schroedinger kernel.  Real case: (dt)^{-n/2} e^{-pi r^2/dt}
// for dt > 0 and exactly 0 for dt <= 0.  Imaginary case: (i dt)^{-n/2}
// e^{-pi r^2/(i dt)} on the principal branch, both time orders admitted.
Complex free_heat(int n, double r, double dt, KernelCase kcase);

// Fixed-energy kernel: Laplace transform in tau of the heat kernel,
//   integral_0^inf tau^{-n/2} exp(-2 pi E tau - pi r^2 / tau) dtau,
// in closed form for n = 3 ((1/r) e^{-2 pi r sqrt(2E)}) and by adaptive
// quadrature otherwise.  E = 0 reduces to free_elliptic for n >= 3.
double fixed_energy(int n, double r, double energy);

// Elliptic elementary (Green) kernel of a bounded/planar domain.
//   HalfSpace / UnitStrip / UnitBox: weighted image sums of free_elliptic,
//   truncated so the certified tail is below tol (strip and box Dirichlet
//   sums are organized in reflection quadrupoles; the box sum is evaluated
//   as the tau-integral of the certified heat image sum).
//   Ball (n=3, Dirichlet): 1/|x'-x| - 1/|(|x|/R) x' - R n_x|.
//   Quadrant (Dirichlet): the four-log expression.
double domain_green(const DomainSpec& domain, BoundaryCondition bc, const Point& x,
                    const Point& xp, double tol);

// Parabolic elementary kernel of half-space / strip / box via the Gaussian
// image sum; with dt = x_b^0 this is also the Cauchy kernel.  Real case only.
double heat_domain_kernel(const DomainSpec& domain, BoundaryCondition bc, const Point& x,
                          double dt, const Point& xp, double tol);

// Elliptic boundary kernel: Poisson kernel of the n-ball (interior and
// exterior) and the three quadrant segment kernels.
double boundary_kernel_elliptic(const DomainSpec& domain, const Point& x, const Point& xb,
                                QuadrantNormalization mode = QuadrantNormalization::AsPrinted);

// Parabolic boundary (first-passage) kernel of the half-space:
//   x^n (dt)^{-(n/2+1)} exp(-pi |x_B - x|^2 / dt) for dt > 0, else 0.
// Taken positive: it is a first-passage probability density.
double boundary_kernel_parabolic(const DomainSpec& domain, const Point& x, double dt,
                                 const Point& xb);

// Mollified hyperbolic kernel I(u; n) for even n >= 4 as a function of the
// invariant interval u = (Delta y)^2: the distributional family
// c_n delta^{(n/2-2)}(u) with a Gaussian mollifier of width w.  For n = 4
// this is 2 eta_w(u), converging weakly to 2 delta(u).
double hyperbolic_I(int n, double u, double width);

}  // namespace greenpath
