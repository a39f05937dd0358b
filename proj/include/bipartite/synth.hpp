#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bipartite/data_model.hpp"
#include "bipartite/exposure.hpp"
#include "bipartite/stats.hpp"

namespace bipartite {

// Synthetic bipartite generator: point sources and receptors scattered in
// a square, linked by a drifted Gaussian plume kernel with log-normal
// emissions, plus a fully known treatment/outcome process. Stands in for
// a real dispersion model only to the extent of producing valid
// interference maps with known ground truth.
struct SynthConfig {
  std::size_t n_outcome = 500;
  std::size_t n_interventional = 50;
  double extent_km = 1000.0;
  double sigma_km = 150.0;  // plume decay length
  double drift_x_km = 80.0;
  double drift_y_km = 30.0;
  double emission_log_mean = 0.0;
  double emission_log_sd = 1.0;  // a few dominant sources
  // Entries below the relative threshold are dropped; each receptor keeps
  // at least its strongest source so the map stays valid.
  double sparsity_rel_threshold = 1e-6;

  std::size_t n_int_covariates = 1;
  std::size_t n_out_covariates = 2;
  // S_j ~ Bernoulli(inv-logit(gamma_0 + gamma' w_j)); length 1 + n_int.
  std::vector<double> treatment_coefs = {0.0, 0.8};
  // First outcome covariate mixes in the key plant's first covariate:
  // v_1 = confounding * w_1(j*) + N(0,1).
  double confounding = 0.0;

  double beta0 = -6.0;
  double beta_z = -0.3;
  double beta_g = -0.8;
  std::vector<double> beta_x = {0.3, 0.2};  // length n_out_covariates
  // Optional effect modification by the first outcome covariate:
  // per-unit slopes beta_z + beta_z_by_x1 * v_1, beta_g + beta_g_by_x1 * v_1.
  double beta_z_by_x1 = 0.0;
  double beta_g_by_x1 = 0.0;

  OutcomeFamily family = OutcomeFamily::poisson_offset;
  double offset_log_mean = 9.2103403719761827;  // log(10000) person-years
  double offset_log_sd = 0.3;
  double normal_sd = 1.0;

  std::uint64_t seed = 1;
};

// Closed-form truth: per-unit baselines and effective slopes, so
// mu(z,g) = denom * mean_i(base_i * exp(bz_i z + bg_i g))   (Poisson rate)
//         = mean_i(base_i + bz_i z + bg_i g)                 (normal)
struct GroundTruth {
  OutcomeFamily family = OutcomeFamily::poisson_offset;
  double rate_denominator = 10000.0;
  std::vector<double> base;
  std::vector<double> bz;
  std::vector<double> bg;

  double true_mu(double z, double g) const;
};

struct TrueEstimands {
  std::vector<double> g_grid;
  std::vector<double> tau_of_g;
  double tau = 0.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
};

struct SynthResult {
  BipartiteDataset dataset;
  GroundTruth truth;
};

// Gaussian plume weight of a source on a receptor (exposed for property
// tests; generate() uses exactly this).
double plume_weight(double source_x, double source_y, double receptor_x,
                    double receptor_y, double emission, double sigma,
                    double drift_x, double drift_y);

SynthResult generate(const SynthConfig& config);

// True tau(g)/tau/Delta(z) with the same grid and interpolation
// conventions as the estimation pipeline, averaged over g_values.
TrueEstimands true_estimands(const GroundTruth& truth,
                             std::span<const double> g_values,
                             const GridSpec& grid);

}  // namespace bipartite
