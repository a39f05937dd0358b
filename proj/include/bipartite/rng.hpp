#pragma once

#include <cstdint>
#include <cstddef>

namespace bipartite {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that generated
// datasets and bootstrap draws are bit-stable across platforms and
// standard-library versions. Streams derived from (seed, stream) are
// statistically independent, which is what makes bootstrap results
// invariant to the worker count: replicate r always consumes stream r.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1]; used where log(u) must stay finite.
  double uniform_pos();
  // Standard normal via Box-Muller (second deviate cached).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  // Poisson draw; inversion for small means, Hormann's PTRS otherwise.
  long poisson(double mean);
  // Unbiased draw from {0, ..., n-1}.
  std::size_t uniform_index(std::size_t n);

private:
  std::uint64_t state_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace bipartite
