#pragma once

#include <cstddef>
#include <string_view>

namespace bipartite::kernels {

// Dense double-precision kernels behind the GLM and dose-response inner
// loops. Each instruction set provides one table; the active table is
// picked once at runtime (AVX2+FMA when the CPU has it, scalar otherwise)
// and can be forced with BIPARTITE_KERNELS=scalar|avx2 or set_active().
//
// SIMD variants may reassociate sums, so they are equivalence-tested
// against the scalar reference rather than required to match bit-for-bit.
// Code that promises bit-exact ordered summation (the exposure module)
// must not call through this table.
struct Ops {
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * w[i]
  double (*dot3)(const double* a, const double* b, const double* w,
                 std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = exp(a[i]); overflow saturates to +inf, deep underflow to 0
  void (*exp_vec)(const double* a, double* out, std::size_t n);
};

const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
bool cpu_supports_avx2();
#endif

// Active table (cached after first query).
const Ops& active();
// Force a table by name ("scalar", "avx2", "auto"); returns false if the
// name is unknown or unsupported on this CPU.
bool set_active(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double dot3(const double* a, const double* b, const double* w,
                   std::size_t n) {
  return active().dot3(a, b, w, n);
}
inline double sum(const double* a, std::size_t n) {
  return active().sum(a, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void exp_vec(const double* a, double* out, std::size_t n) {
  active().exp_vec(a, out, n);
}

}  // namespace bipartite::kernels
