#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "greenpath/expressions.hpp"
#include "greenpath/geometry.hpp"

namespace greenpath {

// Scalar data field (source f, boundary data phi, Cauchy data psi).  The
// evaluator must be total on its declared domain and safe to call from
// multiple threads.  A support radius (about the origin) bounds where the
// field may be nonzero; quadratures over unbounded regions need it.
class ScalarField {
public:
    using Fn = std::function<double(const Point&, double)>;

    ScalarField() = default;  // identically zero

    static ScalarField zero() { return ScalarField(); }

    static ScalarField constant(double c) {
        ScalarField f;
        if (c != 0.0) f.fn_ = [c](const Point&, double) { return c; };
        return f;
    }

    static ScalarField function(Fn fn) {
        ScalarField f;
        f.fn_ = std::move(fn);
        return f;
    }

    static ScalarField expression(const Expression& expr) {
        ScalarField f;
        f.fn_ = [expr](const Point& p, double t) { return expr.eval(p.coords(), t); };
        return f;
    }

    bool is_zero() const { return !fn_; }

    double operator()(const Point& p, double t = 0.0) const { return fn_ ? fn_(p, t) : 0.0; }

    ScalarField& with_support_radius(double r) {
        support_radius_ = r;
        return *this;
    }
    std::optional<double> support_radius() const { return support_radius_; }

private:
    Fn fn_;
    std::optional<double> support_radius_;
};

}  // namespace greenpath
