#include "bipartite/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bipartite/error.hpp"

namespace bipartite {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(n - 1);
}

double sample_sd(std::span<const double> x) {
  return std::sqrt(sample_variance(x));
}

double quantile_midpoint(std::span<const double> sorted, double p) {
  if (sorted.empty()) raise(Errc::length_mismatch, "quantile of empty sample");
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n) * p + 0.5;
  if (h <= 1.0) return sorted.front();
  if (h >= static_cast<double>(n)) return sorted.back();
  const std::size_t idx = static_cast<std::size_t>(h);  // floor, >= 1
  const double frac = h - static_cast<double>(idx);
  const double lo = sorted[idx - 1];
  const double hi = sorted[idx];
  if (frac == 0.0) return lo;
  return lo + frac * (hi - lo);
}

double quantile_midpoint_unsorted(std::span<const double> values, double p) {
  std::vector<double> tmp(values.begin(), values.end());
  std::sort(tmp.begin(), tmp.end());
  return quantile_midpoint(tmp, p);
}

double linear_interp(std::span<const double> grid, std::span<const double> y,
                     double x) {
  if (grid.size() != y.size() || grid.empty())
    raise(Errc::length_mismatch, "interpolation grid/value size mismatch");
  if (x <= grid.front()) return y.front();
  if (x >= grid.back()) return y.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  if (x == grid[lo]) return y[lo];  // exact grid hits stay bit-exact
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return y[lo] + t * (y[hi] - y[lo]);
}

std::vector<double> GridSpec::points() const {
  if (!(step > 0.0) || !(stop > start))
    raise(Errc::config_error, "grid requires stop > start and step > 0");
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
  std::vector<double> g;
  g.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i)
    g.push_back(start + static_cast<double>(i) * step);
  g.push_back(stop);  // pin the endpoint exactly
  return g;
}

}  // namespace bipartite
