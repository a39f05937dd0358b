#include <cmath>
#include <cstddef>

#include "bipartite/kernels.hpp"

// Reference kernels. Plain sequential loops; the SIMD tables are tested
// for equivalence against these.

namespace bipartite::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_scalar(const double* a, const double* b, const double* w,
                   std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * w[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void exp_scalar(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a[i]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",   dot_scalar,  dot3_scalar,
                       sum_scalar, axpy_scalar, exp_scalar};
  return ops;
}

}  // namespace bipartite::kernels
