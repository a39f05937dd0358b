#pragma once

#include <span>
#include <vector>

#include "bipartite/analysis_table.hpp"
#include "bipartite/propensity.hpp"
#include "bipartite/stats.hpp"

namespace bipartite {

enum class SurfaceScale { rate_per_10k, outcome_native };

// Person-years denominator for rate-scale Poisson surfaces.
inline constexpr double kRateDenominator = 10000.0;

struct DoseResponseSurface {
  std::vector<double> g_grid;
  int n_strata = 0;
  std::vector<double> stratum_weights;  // pi_k over kept units
  // mu_strata[z][k][gi]; mu_pooled[z][gi] = sum_k pi_k * mu_strata[z][k][gi]
  std::vector<std::vector<std::vector<double>>> mu_strata;
  std::vector<std::vector<double>> mu_pooled;
  SurfaceScale scale = SurfaceScale::rate_per_10k;
  // Observed G range per stratum and the fraction of grid points outside
  // it (counterfactual extrapolation diagnostic; reported, not prevented).
  std::vector<double> g_observed_min, g_observed_max;
  std::vector<double> extrapolation_fraction;
};

struct EffectEstimates {
  std::vector<double> g_grid;
  std::vector<double> tau_of_g;      // mu(1,g) - mu(0,g)
  std::vector<double> delta_of_g_z0; // mu(0,g) - mu(0,0)
  std::vector<double> delta_of_g_z1; // mu(1,g) - mu(1,0)
  double tau = 0.0;     // mean_i tau(G_i)
  double delta0 = 0.0;  // Delta(0) = mean_i delta(G_i; 0)
  double delta1 = 0.0;  // Delta(1) = mean_i delta(G_i; 1)
};

// Per-stratum outcome regressions of Y on [Z, G, lambda-hat, x_out_outcome]
// (Poisson with log person-years offset, or plain normal). An all-zero
// count stratum comes back flagged nonconverged rather than diverging.
std::vector<GlmFit> fit_outcome_models(const AnalysisTable& table,
                                       const StratifiedPropensityFit& sp);

// Counterfactual dose-response surface: for every kept unit, grid point
// (z, g) re-evaluates the GPS density at that (z, g) — never at the
// observed exposure — then averages predictions within stratum (ascending
// unit order) and pools across strata by pi_k. Poisson predictions are
// rates per 10,000 person-years.
DoseResponseSurface predict_surface(const std::vector<GlmFit>& outcome_fits,
                                    const StratifiedPropensityFit& sp,
                                    const AnalysisTable& table,
                                    const GridSpec& grid);

// tau(g), delta(g;z) from the pooled surface; tau and Delta(z) average the
// curves over the supplied empirical G values by linear interpolation.
EffectEstimates estimands(const DoseResponseSurface& surface,
                          std::span<const double> g_values);

}  // namespace bipartite
