#include "greenpath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace greenpath {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(f - lo), std::abs(f - hi)});
    }
    return d;
}

double chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw std::invalid_argument("chi_square: nonpositive expected count");
        const double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

double chi_square_quantile(int dof, double z) {
    const double k = static_cast<double>(dof);
    const double a = 2.0 / (9.0 * k);
    const double c = 1.0 - a + z * std::sqrt(a);
    return k * c * c * c;
}

int SpherePatches::classify(const Point& p) const {
    const double r = p.norm();
    const double z = std::clamp(p[2] / r, -1.0, 1.0);
    // Equal z-slices have equal area on the sphere.
    int band = std::min(n_bands - 1, static_cast<int>((z + 1.0) / 2.0 * n_bands));
    double az = std::atan2(p[1], p[0]);
    if (az < 0.0) az += 2.0 * std::numbers::pi;
    int sector = std::min(n_sectors - 1, static_cast<int>(az / (2.0 * std::numbers::pi) * n_sectors));
    return band * n_sectors + sector;
}

}  // namespace greenpath
