#pragma once

#include <functional>
#include <vector>

#include "greenpath/geometry.hpp"

namespace greenpath {

// Kolmogorov-Smirnov distance between a sample and a CDF.  Sorts a copy of
// the sample.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Pearson chi-square statistic of observed counts against expected counts.
double chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& expected);

// Upper chi-square quantile via the Wilson-Hilferty cube approximation,
// z being the standard normal deviate (z = 3 for the 3-sigma level).
double chi_square_quantile(int dof, double z);

// Equal-area partition of the unit sphere into z-bands times azimuthal
// sectors; returns the patch index of a point on (or near) the sphere.
struct SpherePatches {
    int n_bands;
    int n_sectors;
    int count() const { return n_bands * n_sectors; }
    int classify(const Point& p) const;
};

}  // namespace greenpath
