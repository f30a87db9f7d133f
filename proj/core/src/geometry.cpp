#include "greenpath/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace greenpath {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_dim(const DomainSpec& domain, const Point& p) {
    if (p.dim() != domain.n)
        fail("point dimension " + std::to_string(p.dim()) + " does not match domain " +
             domain.to_string());
}

}  // namespace

Point::Point(int n, double fill) : n_(n) {
    if (n < 0 || n > kMaxDim) fail("unsupported point dimension " + std::to_string(n));
    for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] = fill;
}

Point::Point(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    if (n_ > kMaxDim) fail("unsupported point dimension");
    int i = 0;
    for (double x : xs) c_[static_cast<std::size_t>(i++)] = x;
}

Point Point::of(std::span<const double> xs) {
    Point p(static_cast<int>(xs.size()));
    for (int i = 0; i < p.n_; ++i) p[i] = xs[static_cast<std::size_t>(i)];
    return p;
}

double Point::norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += c_[static_cast<std::size_t>(i)] * c_[static_cast<std::size_t>(i)];
    return s;
}

double Point::norm() const { return std::sqrt(norm_sq()); }

double Point::dist_sq(const Point& other) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double d = c_[static_cast<std::size_t>(i)] - other.c_[static_cast<std::size_t>(i)];
        s += d * d;
    }
    return s;
}

double Point::dist(const Point& other) const { return std::sqrt(dist_sq(other)); }

bool Point::all_finite() const {
    for (int i = 0; i < n_; ++i)
        if (!std::isfinite(c_[static_cast<std::size_t>(i)])) return false;
    return true;
}

Point& Point::operator+=(const Point& rhs) {
    for (int i = 0; i < n_; ++i) c_[static_cast<std::size_t>(i)] += rhs.c_[static_cast<std::size_t>(i)];
    return *this;
}

Point& Point::operator-=(const Point& rhs) {
    for (int i = 0; i < n_; ++i) c_[static_cast<std::size_t>(i)] -= rhs.c_[static_cast<std::size_t>(i)];
    return *this;
}

Point& Point::operator*=(double s) {
    for (int i = 0; i < n_; ++i) c_[static_cast<std::size_t>(i)] *= s;
    return *this;
}

std::string Point::to_string() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < n_; ++i) os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
    os << ")";
    return os.str();
}

DomainSpec DomainSpec::free_space(int n) { return {DomainKind::FreeSpace, n, 0.0}; }
DomainSpec DomainSpec::half_space(int n) { return {DomainKind::HalfSpace, n, 0.0}; }
DomainSpec DomainSpec::unit_strip(int n) { return {DomainKind::UnitStrip, n, 0.0}; }
DomainSpec DomainSpec::unit_box(int n) { return {DomainKind::UnitBox, n, 0.0}; }

DomainSpec DomainSpec::ball(int n, double radius) {
    if (radius <= 0.0) fail("ball radius must be positive");
    return {DomainKind::BallInterior, n, radius};
}

DomainSpec DomainSpec::ball_exterior(int n, double radius) {
    if (radius <= 0.0) fail("ball radius must be positive");
    return {DomainKind::BallExterior, n, radius};
}

DomainSpec DomainSpec::quadrant() { return {DomainKind::Quadrant, 2, 0.0}; }

DomainSpec DomainSpec::parse(std::string_view text) {
    auto next = [&text]() -> std::string {
        const auto pos = text.find(':');
        std::string tok(text.substr(0, pos));
        text = (pos == std::string_view::npos) ? std::string_view{} : text.substr(pos + 1);
        return tok;
    };
    const std::string head = next();
    auto want_int = [&](const std::string& what) {
        const std::string tok = next();
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            fail("domain spec: bad " + what + " '" + tok + "'");
        }
        if (used != tok.size() || v < 1 || v > Point::kMaxDim) fail("domain spec: bad " + what + " '" + tok + "'");
        return v;
    };
    auto want_real = [&](const std::string& what) {
        const std::string tok = next();
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            fail("domain spec: bad " + what + " '" + tok + "'");
        }
        if (used != tok.size() || !(v > 0.0)) fail("domain spec: bad " + what + " '" + tok + "'");
        return v;
    };
    auto done = [&] {
        if (!text.empty()) fail("domain spec: trailing junk");
    };

    DomainSpec d;
    if (head == "free") {
        d = free_space(want_int("dimension"));
    } else if (head == "halfspace") {
        d = half_space(want_int("dimension"));
    } else if (head == "strip") {
        d = unit_strip(want_int("dimension"));
    } else if (head == "box") {
        d = unit_box(want_int("dimension"));
    } else if (head == "ball") {
        const int n = want_int("dimension");
        d = ball(n, want_real("radius"));
    } else if (head == "ball-ext") {
        const int n = want_int("dimension");
        d = ball_exterior(n, want_real("radius"));
    } else if (head == "quadrant") {
        d = quadrant();
    } else {
        fail("unknown domain '" + head + "'");
    }
    done();
    return d;
}

std::string DomainSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case DomainKind::FreeSpace: os << "free:" << n; break;
        case DomainKind::HalfSpace: os << "halfspace:" << n; break;
        case DomainKind::UnitStrip: os << "strip:" << n; break;
        case DomainKind::UnitBox: os << "box:" << n; break;
        case DomainKind::BallInterior: os << "ball:" << n << ":" << radius; break;
        case DomainKind::BallExterior: os << "ball-ext:" << n << ":" << radius; break;
        case DomainKind::Quadrant: os << "quadrant"; break;
    }
    return os.str();
}

bool contains(const DomainSpec& domain, const Point& p) {
    check_dim(domain, p);
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            return true;
        case DomainKind::HalfSpace:
            return p[domain.n - 1] >= 0.0;
        case DomainKind::UnitStrip:
            return p[domain.n - 1] >= 0.0 && p[domain.n - 1] <= 1.0;
        case DomainKind::UnitBox:
            for (int i = 0; i < domain.n; ++i)
                if (p[i] < 0.0 || p[i] > 1.0) return false;
            return true;
        case DomainKind::BallInterior:
            return p.norm_sq() <= domain.radius * domain.radius;
        case DomainKind::BallExterior:
            return p.norm_sq() >= domain.radius * domain.radius;
        case DomainKind::Quadrant:
            return p[0] >= 0.0 && p[1] >= 0.0;
    }
    fail("unreachable domain kind");
}

double distance_to_boundary(const DomainSpec& domain, const Point& p) {
    if (!contains(domain, p)) fail("distance_to_boundary: point outside " + domain.to_string());
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            return std::numeric_limits<double>::infinity();
        case DomainKind::HalfSpace:
            return p[domain.n - 1];
        case DomainKind::UnitStrip: {
            const double z = p[domain.n - 1];
            return std::min(z, 1.0 - z);
        }
        case DomainKind::UnitBox: {
            double d = std::numeric_limits<double>::infinity();
            for (int i = 0; i < domain.n; ++i) d = std::min({d, p[i], 1.0 - p[i]});
            return d;
        }
        case DomainKind::BallInterior:
            return domain.radius - p.norm();
        case DomainKind::BallExterior:
            return p.norm() - domain.radius;
        case DomainKind::Quadrant:
            return std::min(p[0], p[1]);
    }
    fail("unreachable domain kind");
}

bool on_boundary(const DomainSpec& domain, const Point& p, double tol) {
    check_dim(domain, p);
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            return false;
        case DomainKind::HalfSpace:
            return std::abs(p[domain.n - 1]) <= tol;
        case DomainKind::UnitStrip: {
            const double z = p[domain.n - 1];
            return std::abs(z) <= tol || std::abs(1.0 - z) <= tol;
        }
        case DomainKind::UnitBox: {
            if (!contains(domain, p)) return false;
            for (int i = 0; i < domain.n; ++i)
                if (std::abs(p[i]) <= tol || std::abs(1.0 - p[i]) <= tol) return true;
            return false;
        }
        case DomainKind::BallInterior:
        case DomainKind::BallExterior:
            return std::abs(p.norm() - domain.radius) <= tol;
        case DomainKind::Quadrant:
            return (std::abs(p[0]) <= tol && p[1] >= -tol) || (std::abs(p[1]) <= tol && p[0] >= -tol);
    }
    fail("unreachable domain kind");
}

Point boundary_normal(const DomainSpec& domain, const Point& p) {
    check_dim(domain, p);
    if (!on_boundary(domain, p)) fail("boundary_normal: point not on boundary of " + domain.to_string());
    const int n = domain.n;
    Point normal(n, 0.0);
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            fail("boundary_normal: free space has no boundary");
        case DomainKind::HalfSpace:
            normal[n - 1] = -1.0;  // outward means decreasing x^n
            return normal;
        case DomainKind::UnitStrip:
            normal[n - 1] = (std::abs(p[n - 1]) <= kBoundaryTol) ? -1.0 : 1.0;
            return normal;
        case DomainKind::UnitBox: {
            int face = -1;
            double sign = 0.0;
            for (int i = 0; i < n; ++i) {
                const bool lo = std::abs(p[i]) <= kBoundaryTol;
                const bool hi = std::abs(1.0 - p[i]) <= kBoundaryTol;
                if (lo || hi) {
                    if (face >= 0) fail("boundary_normal: box edge/corner has no normal");
                    face = i;
                    sign = lo ? -1.0 : 1.0;
                }
            }
            normal[face] = sign;
            return normal;
        }
        case DomainKind::BallInterior: {
            const double r = p.norm();
            for (int i = 0; i < n; ++i) normal[i] = p[i] / r;
            return normal;
        }
        case DomainKind::BallExterior: {
            const double r = p.norm();
            for (int i = 0; i < n; ++i) normal[i] = -p[i] / r;  // outward of the exterior region
            return normal;
        }
        case DomainKind::Quadrant: {
            const bool on_x_axis = std::abs(p[1]) <= kBoundaryTol;
            const bool on_y_axis = std::abs(p[0]) <= kBoundaryTol;
            if (on_x_axis && on_y_axis) fail("boundary_normal: quadrant corner has no normal");
            if (on_x_axis)
                normal[1] = -1.0;
            else
                normal[0] = -1.0;
            return normal;
        }
    }
    fail("unreachable domain kind");
}

Point project_to_boundary(const DomainSpec& domain, const Point& p) {
    check_dim(domain, p);
    Point q = p;
    switch (domain.kind) {
        case DomainKind::FreeSpace:
            fail("project_to_boundary: free space has no boundary");
        case DomainKind::HalfSpace:
            q[domain.n - 1] = 0.0;
            return q;
        case DomainKind::UnitStrip: {
            const double z = p[domain.n - 1];
            q[domain.n - 1] = (z <= 0.5) ? 0.0 : 1.0;
            return q;
        }
        case DomainKind::UnitBox: {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            double best_v = 0.0;
            for (int i = 0; i < domain.n; ++i) {
                if (p[i] < best_d) { best_d = p[i]; best = i; best_v = 0.0; }
                if (1.0 - p[i] < best_d) { best_d = 1.0 - p[i]; best = i; best_v = 1.0; }
            }
            q[best] = best_v;
            return q;
        }
        case DomainKind::BallInterior:
        case DomainKind::BallExterior: {
            const double r = p.norm();
            if (r == 0.0) {  // center: any boundary point is nearest; pick the +x pole
                q = Point(domain.n, 0.0);
                q[0] = domain.radius;
                return q;
            }
            const double s = domain.radius / r;
            for (int i = 0; i < domain.n; ++i) q[i] = p[i] * s;
            return q;
        }
        case DomainKind::Quadrant: {
            if (p[0] < p[1])
                q[0] = 0.0;
            else
                q[1] = 0.0;
            return q;
        }
    }
    fail("unreachable domain kind");
}

}  // namespace greenpath
