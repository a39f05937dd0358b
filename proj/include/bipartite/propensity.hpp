#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bipartite/analysis_table.hpp"
#include "bipartite/glm.hpp"

namespace bipartite {

// Overlap trimming rule. minmax is the common-support default; quantile
// additionally pulls the bounds to the alpha / 1-alpha within-group
// quantiles (alpha in [0, 0.05]).
struct TrimRule {
  enum class Kind { none, minmax, quantile };
  Kind kind = Kind::minmax;
  double alpha = 0.0;
};

struct TrimBounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct KeyPsFit {
  GlmFit fit;                   // logistic, gamma-hat
  std::vector<double> phi_hat;  // fitted P(Z=1|x), clamped to (0,1)
};

// Logistic regression of Z on [x_int_z via j*, x_out_z]. A constant
// treatment vector is surfaced as Separation; partial separation is
// flagged on the fit and logged, not fatal.
KeyPsFit fit_key_ps(const AnalysisTable& table);

// Common-support kept flags. The interval is computed once from the full
// (phi, z) input: trimming is a pure flag computation against that
// interval, so re-applying it to the kept subset with the same bounds is
// the identity.
std::vector<std::uint8_t> trim_overlap(std::span<const double> phi_hat,
                                       std::span<const double> z,
                                       const TrimRule& rule,
                                       TrimBounds* bounds_out = nullptr);

struct Subclassification {
  int n_strata = 0;
  std::vector<double> cutpoints;        // K-1, strictly increasing
  std::vector<int> stratum;             // 1..K for kept units, 0 for dropped
  std::vector<double> stratum_weights;  // pi_k = n_k / n_kept
  std::vector<std::size_t> stratum_sizes;
  std::size_t n_kept = 0;

  // Kept row indices of stratum k (1-based), ascending.
  std::vector<std::uint32_t> members(int k) const;
};

// Quantile subclassification on phi-hat. Cutpoints are the k/K
// midpoint-interpolated quantiles among kept treated units (all kept
// units when quantiles_on_treated is false). Strata are left-closed,
// the last right-closed.
Subclassification subclassify(std::span<const double> phi_hat,
                              std::span<const double> z,
                              std::span<const std::uint8_t> kept, int n_strata,
                              bool quantiles_on_treated = true);

struct BalanceRow {
  std::string name;
  double smd_unadjusted = 0.0;
  std::vector<double> smd_stratum;  // per stratum; NaN when a group is empty
  double smd_stratum_avg = 0.0;     // sum_k pi_k * SMD_k
  bool zero_variance = false;       // SMD reported as signed infinity
};

// Standardized mean differences for every f^Z covariate: unadjusted over
// kept units, within each stratum, and stratum-averaged.
std::vector<BalanceRow> balance_table(const AnalysisTable& table,
                                      std::span<const std::uint8_t> kept,
                                      const Subclassification& strata);

struct StratumGps {
  std::vector<GlmFit> fits;        // one normal-family f^G per stratum
  std::vector<double> lambda_hat;  // density at observed (Z_i, G_i); NaN if dropped
};

// Per-stratum normal regressions of G on [Z, x_int_g, x_out_g], with the
// stratum's own coefficients; lambda-hat is the fitted density at each
// kept unit's observed exposure.
StratumGps fit_stratum_gps(const AnalysisTable& table,
                           std::span<const std::uint8_t> kept,
                           const Subclassification& strata);

struct StratifiedPropensityFit {
  KeyPsFit key;
  TrimBounds bounds;
  std::vector<std::uint8_t> kept;
  std::size_t n_trimmed = 0;
  Subclassification strata;
  StratumGps gps;
};

StratifiedPropensityFit fit_propensity(const AnalysisTable& table,
                                       const TrimRule& trim, int n_strata,
                                       bool quantiles_on_treated = true);

// Joint score psi(z, g | x) = phi(z|x_z) * lambda(g | z, x_g): evaluated
// as the literal product of the two factors.
double joint_psi(const KeyPsFit& key, const GlmFit& gps_fit,
                 std::span<const double> x_z, std::span<const double> x_g_with_z,
                 double z, double g);

}  // namespace bipartite
