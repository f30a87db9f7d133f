#include "greenpath/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace greenpath {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15 / Gauss 7 pair (QUADPACK dqk15 abscissae and weights).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b;
    double value;
    double error;
    double resabs;  // integral of |f|, for the round-off floor
};

struct SegmentCmp {
    bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.error < rhs.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<double, 8> f_lo{}, f_hi{};
    const double fc = f(mid);
    double resk = kKronrodWeights[7] * fc;
    double resg = kGaussWeights[3] * fc;
    double resabs = kKronrodWeights[7] * std::abs(fc);
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        f_lo[i] = f(mid - dx);
        f_hi[i] = f(mid + dx);
        resk += kKronrodWeights[i] * (f_lo[i] + f_hi[i]);
        resabs += kKronrodWeights[i] * (std::abs(f_lo[i]) + std::abs(f_hi[i]));
        if (i % 2 == 1) resg += kGaussWeights[i / 2] * (f_lo[i] + f_hi[i]);
    }
    const double reskh = resk * 0.5;
    double resasc = kKronrodWeights[7] * std::abs(fc - reskh);
    for (std::size_t i = 0; i < 7; ++i)
        resasc += kKronrodWeights[i] * (std::abs(f_lo[i] - reskh) + std::abs(f_hi[i] - reskh));
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * kEps * resabs);
    return {a, b, resk * half, err, resabs};
}

QuadratureResult adapt_1d(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, long max_evals, int init_split = 1) {
    std::priority_queue<Segment, std::vector<Segment>, SegmentCmp> queue;
    long evals = 0;
    double total = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    init_split = std::max(1, init_split);
    for (int i = 0; i < init_split; ++i) {
        Segment seg = gk15(f, a + (b - a) * i / init_split, a + (b - a) * (i + 1) / init_split);
        evals += 15;
        total += seg.value;
        err += seg.error;
        resabs += seg.resabs;
        queue.push(seg);
    }
    auto converged = [&] {
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        // The second clause is the round-off limit: once the error estimate
        // sits at the 15-point rule's floating-point floor, subdividing
        // further cannot improve anything.
        return err <= tol || err <= 100.0 * kEps * resabs;
    };
    while (!converged() && !queue.empty()) {
        if (evals + 30 > max_evals)
            throw QuadratureError("adaptive quadrature did not converge within the evaluation budget");
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) continue;  // interval exhausted at machine precision
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        queue.push(left);
        queue.push(right);
    }
    return {total, err, evals};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, long max_evals, int init_split) {
    if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
        throw std::invalid_argument("integrate: tolerance must be positive");
    if (a == b) return {0.0, 0.0, 0};
    return adapt_1d(f, a, b, abs_tol, rel_tol, max_evals, init_split);
}

QuadratureResult integrate_to_inf(const std::function<double(double)>& f, double a,
                                  double abs_tol, double rel_tol, long max_evals) {
    // t = a + u/(1-u) maps [0,1) to [a,inf); dt = du/(1-u)^2.
    auto g = [&f, a](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0) return 0.0;
        const double t = a + u / om;
        if (!std::isfinite(t)) return 0.0;
        return f(t) / (om * om);
    };
    return adapt_1d(g, 0.0, 1.0, abs_tol, rel_tol, max_evals);
}

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 256) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

struct Cell {
    double ax, bx, ay, by;
    double value;
    double error;
    double resabs;
};

struct CellCmp {
    bool operator()(const Cell& lhs, const Cell& rhs) const { return lhs.error < rhs.error; }
};

Cell eval_cell(const std::function<double(double, double)>& f, double ax, double bx, double ay,
               double by) {
    const GaussRule& lo = gauss_legendre(4);
    const GaussRule& hi = gauss_legendre(8);
    const double hx = 0.5 * (bx - ax), cx = 0.5 * (bx + ax);
    const double hy = 0.5 * (by - ay), cy = 0.5 * (by + ay);
    auto tensor = [&](const GaussRule& rule, double* abs_sum) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double w = rule.weights[i] * rule.weights[j];
                const double v = f(cx + hx * rule.nodes[i], cy + hy * rule.nodes[j]);
                sum += w * v;
                if (abs_sum) *abs_sum += w * std::abs(v);
            }
        return sum * hx * hy;
    };
    const double coarse = tensor(lo, nullptr);
    double resabs = 0.0;
    const double fine = tensor(hi, &resabs);
    resabs *= hx * hy;
    const double err = std::max(std::abs(fine - coarse), 50.0 * kEps * std::abs(resabs));
    return {ax, bx, ay, by, fine, err, std::abs(resabs)};
}

}  // namespace

QuadratureResult integrate2d(const std::function<double(double, double)>& f, double ax, double bx,
                             double ay, double by, double abs_tol, double rel_tol, long max_evals,
                             int init_split) {
    if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
        throw std::invalid_argument("integrate2d: tolerance must be positive");
    init_split = std::max(1, init_split);
    std::priority_queue<Cell, std::vector<Cell>, CellCmp> queue;
    long evals = 0;
    double total = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    for (int i = 0; i < init_split; ++i) {
        for (int j = 0; j < init_split; ++j) {
            Cell cell = eval_cell(f, ax + (bx - ax) * i / init_split, ax + (bx - ax) * (i + 1) / init_split,
                                  ay + (by - ay) * j / init_split, ay + (by - ay) * (j + 1) / init_split);
            evals += 80;
            total += cell.value;
            err += cell.error;
            resabs += cell.resabs;
            queue.push(cell);
        }
    }
    auto converged = [&] {
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        return err <= tol || err <= 100.0 * kEps * resabs;
    };
    while (!converged() && !queue.empty()) {
        if (evals + 320 > max_evals)
            throw QuadratureError("adaptive cubature did not converge within the evaluation budget");
        Cell worst = queue.top();
        queue.pop();
        const double mx = 0.5 * (worst.ax + worst.bx);
        const double my = 0.5 * (worst.ay + worst.by);
        if ((mx <= worst.ax || mx >= worst.bx) && (my <= worst.ay || my >= worst.by)) continue;
        std::array<Cell, 4> kids = {eval_cell(f, worst.ax, mx, worst.ay, my),
                                    eval_cell(f, mx, worst.bx, worst.ay, my),
                                    eval_cell(f, worst.ax, mx, my, worst.by),
                                    eval_cell(f, mx, worst.bx, my, worst.by)};
        evals += 320;
        total -= worst.value;
        err -= worst.error;
        resabs -= worst.resabs;
        for (const Cell& kid : kids) {
            total += kid.value;
            err += kid.error;
            resabs += kid.resabs;
            queue.push(kid);
        }
    }
    return {total, err, evals};
}

double tensor_gauss(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> lo, std::span<const double> hi, int order) {
    const std::size_t dim = lo.size();
    if (dim == 0 || dim != hi.size()) throw std::invalid_argument("tensor_gauss: bad box");
    const GaussRule& rule = gauss_legendre(order);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double h = 0.5 * (hi[d] - lo[d]);
            const double c = 0.5 * (hi[d] + lo[d]);
            x[d] = c + h * rule.nodes[idx[d]];
            w *= h * rule.weights[idx[d]];
        }
        sum += w * f(x);
        std::size_t d = 0;
        while (d < dim && ++idx[d] == rule.nodes.size()) idx[d++] = 0;
        if (d == dim) break;
    }
    return sum;
}

}  // namespace greenpath
