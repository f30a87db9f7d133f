#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace greenpath {

// Absolute tolerance for deciding that a point sits on a domain boundary.
// Every canonical boundary here (coordinate planes, unit walls, spheres of
// given radius) is exactly representable, so only rounding noise has to be
// absorbed.
inline constexpr double kBoundaryTol = 1e-12;

// A point of R^n with small inline storage.  The ambient dimension is part
// of the value; mixing dimensions is a caller bug and is checked where it
// matters.
class Point {
public:
    static constexpr int kMaxDim = 8;

    Point() = default;
    explicit Point(int n, double fill = 0.0);
    Point(std::initializer_list<double> xs);
    static Point of(std::span<const double> xs);

    int dim() const { return n_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const double* data() const { return c_.data(); }
    double* data() { return c_.data(); }
    std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(n_)}; }

    double norm_sq() const;
    double norm() const;
    double dist(const Point& other) const;
    double dist_sq(const Point& other) const;
    bool all_finite() const;

    Point& operator+=(const Point& rhs);
    Point& operator-=(const Point& rhs);
    Point& operator*=(double s);
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, Point p) { return p *= s; }
    friend bool operator==(const Point&, const Point&) = default;

    std::string to_string() const;

private:
    std::array<double, kMaxDim> c_{};
    int n_ = 0;
};

// Space-time point (x, x^0) with x^0 >= 0.
struct SpaceTimePoint {
    Point space;
    double time = 0.0;
};

enum class DomainKind {
    FreeSpace,     // all of R^n
    HalfSpace,     // x^n >= 0
    UnitStrip,     // 0 <= x^n <= 1
    UnitBox,       // 0 <= x^i <= 1 for all i
    BallInterior,  // |x| <= R
    BallExterior,  // |x| >= R
    Quadrant,      // n = 2, x^1 >= 0 and x^2 >= 0
};

// Tagged description of a canonical flat domain.
struct DomainSpec {
    DomainKind kind = DomainKind::FreeSpace;
    int n = 1;
    double radius = 1.0;  // balls only

    static DomainSpec free_space(int n);
    static DomainSpec half_space(int n);
    static DomainSpec unit_strip(int n);
    static DomainSpec unit_box(int n);
    static DomainSpec ball(int n, double radius);
    static DomainSpec ball_exterior(int n, double radius);
    static DomainSpec quadrant();

    // Grammar: free:<n>, halfspace:<n>, strip:<n>, box:<n>, ball:<n>:<R>,
    // ball-ext:<n>:<R>, quadrant.  Throws std::invalid_argument on anything else.
    static DomainSpec parse(std::string_view text);
    std::string to_string() const;

    bool is_ball() const { return kind == DomainKind::BallInterior || kind == DomainKind::BallExterior; }
    bool bounded() const { return kind == DomainKind::BallInterior || kind == DomainKind::UnitBox; }
};

// Membership in the closed region.  Throws on dimension mismatch.
bool contains(const DomainSpec& domain, const Point& p);

// Exact Euclidean distance from an interior/boundary point to the boundary.
// FreeSpace returns +infinity.  Throws if p is outside the domain.
double distance_to_boundary(const DomainSpec& domain, const Point& p);

// Outward unit normal at a boundary point.  Throws if p is not on the
// boundary (within kBoundaryTol) or sits at a corner/edge where the normal
// is undefined (quadrant origin, box edges, strip in dimension 0).
Point boundary_normal(const DomainSpec& domain, const Point& p);

bool on_boundary(const DomainSpec& domain, const Point& p, double tol = kBoundaryTol);

// Nearest boundary point (used by the walk-on-spheres sampler to project the
// final eps-shell position).  Defined for points inside the domain.
Point project_to_boundary(const DomainSpec& domain, const Point& p);

}  // namespace greenpath
