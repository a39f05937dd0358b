#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bipartite {

double mean(std::span<const double> x);
// Sample variance (denominator n-1); 0 for n < 2.
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);

// Midpoint-interpolated quantile (h = n*p + 1/2 on 1-indexed order
// statistics, linear between them, clamped to the range). This single rule
// backs both the subclassification cutpoints and the bootstrap percentile
// intervals: quantile({1..100}, 0.05) = 5.5, median({.2,.4,.6,.8}) = 0.5.
double quantile_midpoint(std::span<const double> sorted, double p);
// Convenience: copies, sorts, then evaluates.
double quantile_midpoint_unsorted(std::span<const double> values, double p);

// Piecewise-linear interpolation of y over an ascending grid. Values at
// grid points are returned bit-exactly; x outside the grid clamps to the
// end values.
double linear_interp(std::span<const double> grid, std::span<const double> y,
                     double x);

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.02;
  std::vector<double> points() const;
};

}  // namespace bipartite
