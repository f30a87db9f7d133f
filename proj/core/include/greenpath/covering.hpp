#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "greenpath/geometry.hpp"

namespace greenpath {

// One element of the discrete structure group acting on R^n: per axis the
// map x -> sign * x + 2 * shift.  Reflections and even integer translations
// are exact in floating point, so applying an element preserves distances to
// machine precision.
struct IsometryElement {
    std::array<std::int8_t, Point::kMaxDim> sign{};    // +-1 per axis
    std::array<std::int16_t, Point::kMaxDim> shift{};  // translation is 2*shift
    int dim = 0;

    static IsometryElement identity(int dim);
    Point apply(const Point& p) const;
    int reflection_count() const;  // number of axes with sign -1
};

// One term of an image expansion: the image point of the expanded source
// plus the +-1 weights of the Dirichlet and Neumann representations.  The
// weights fold the explicit minus sign between the two rho terms of the
// half-space kernel, so a kernel is always the plain weighted sum
// K = sum_p w_p * Ktilde_p.
struct ImageTerm {
    Point image;
    IsometryElement element;
    int weight_dirichlet = 1;  // (-1)^(number of reflections)
    int weight_neumann = 1;    // always +1
};

struct ImageExpansion {
    std::vector<ImageTerm> terms;
    int order = 0;           // window half-width M (ignored for the half-space)
    double tail_bound = 0.0; // certified bound on omitted terms at the stamped scale; 0 = exact
};

enum class EquationClass { Parabolic, Elliptic };

// Enumerates the group images of p for half-space / unit strip / unit box.
//   HalfSpace: exactly 2 terms, M ignored.
//   UnitStrip: 2*(2M+1) terms (last axis acted on).
//   UnitBox:   (2*(2M+1))^n terms.
// Terms are emitted shell by shell (shell = max |shift|), identity first, so
// the order-M list is a prefix of the order-(M+1) list.
ImageExpansion enumerate_images(const DomainSpec& domain, const Point& p, int order);

// Smallest window M whose certified tail bound is below tol.
//   Parabolic: scale is the heat time tau; omitted Gaussian images are
//   bounded by a geometric-series majorant of exp(-pi (2M)^2 / tau).
//   Elliptic: scale is the source-target distance; the Dirichlet series is
//   summed in reflection pairs and the bound is the integral-comparison tail
//   of the O(M^-2) pair terms (n >= 3).
int truncation_order(const DomainSpec& domain, EquationClass cls, double scale, double tol);

// The certified bound itself, exposed so tests can compare it against
// directly summed tails.  For the parabolic class this bounds the sum of
// omitted exp(-pi d^2/tau) factors (kernel prefactor not included).
double certified_tail(const DomainSpec& domain, EquationClass cls, double scale, int order);

// Convenience: pick the order from (cls, scale, tol), enumerate, and stamp
// the certified bound.
ImageExpansion build_image_expansion(const DomainSpec& domain, const Point& p, EquationClass cls,
                                     double scale, double tol);

}  // namespace greenpath
