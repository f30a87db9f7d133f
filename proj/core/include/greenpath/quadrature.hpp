#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace greenpath {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;     // estimated absolute error
    long evaluations = 0;
};

// Thrown when an adaptive rule cannot reach the requested tolerance within
// its evaluation budget.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b].  Splits the interval with the
// largest error estimate first; stops when the summed error estimate drops
// below max(abs_tol, rel_tol * |value|).  Throws QuadratureError if the
// budget runs out first.  init_split > 1 seeds the queue with that many
// equal segments (for integrands much narrower than the interval).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol = 0.0, long max_evals = 200000,
                           int init_split = 1);

// Same, on [a, +inf).  The integrand must decay; the tail is mapped onto a
// finite interval via t = a + u/(1-u).
QuadratureResult integrate_to_inf(const std::function<double(double)>& f, double a,
                                  double abs_tol, double rel_tol = 0.0, long max_evals = 200000);

// Adaptive cubature on the rectangle [ax,bx] x [ay,by] (tensor Gauss rules
// on each cell, largest-error-first subdivision).  The rectangle starts as
// an init_split x init_split grid of cells so that narrow peaks are seen by
// at least one coarse rule.
QuadratureResult integrate2d(const std::function<double(double, double)>& f,
                             double ax, double bx, double ay, double by,
                             double abs_tol, double rel_tol = 0.0, long max_evals = 2000000,
                             int init_split = 4);

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Fixed-order tensor Gauss-Legendre over an axis-aligned box.
double tensor_gauss(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> lo, std::span<const double> hi, int order);

}  // namespace greenpath
