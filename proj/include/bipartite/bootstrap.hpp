#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bipartite/pipeline.hpp"

namespace bipartite {

struct BootstrapConfig {
  int replicates = 500;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  int jobs = 1;
  double max_failure_rate = 0.2;
};

struct CiInterval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double sd = 0.0;
};

struct BootstrapResult {
  int replicates = 0;
  int n_failed = 0;
  double ci_level = 0.95;
  CiInterval tau, delta0, delta1;
  std::vector<double> g_grid;
  // Per-grid-point bands for the pooled curves and derived effects.
  std::vector<CiInterval> mu0, mu1, tau_of_g, delta0_of_g, delta1_of_g;
  std::vector<std::string> failures;  // "replicate <r>: <code>: <message>"
};

// Egocentric bootstrap: outcome units are resampled with replacement,
// carrying their derived (j*, Z, G), covariates, outcome and offset as
// fixed node characteristics — exposures are never re-derived from a
// resampled network. The whole estimation pipeline is re-run per
// replicate. Replicate r always consumes the RNG stream (seed, r), so
// results are bit-identical for any worker count. Failed replicates
// (e.g. EmptyAfterTrim in a resample) are logged and excluded;
// TooManyFailures fires past max_failure_rate.
BootstrapResult egocentric_bootstrap(const AnalysisTable& table,
                                     const EstimationConfig& config,
                                     const BootstrapConfig& bootstrap_config);

}  // namespace bipartite
