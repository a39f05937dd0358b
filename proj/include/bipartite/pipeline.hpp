#pragma once

#include "bipartite/analysis_table.hpp"
#include "bipartite/effects.hpp"
#include "bipartite/propensity.hpp"
#include "bipartite/stats.hpp"

namespace bipartite {

struct EstimationConfig {
  int n_strata = 5;
  TrimRule trim;
  bool quantiles_on_treated = true;
  GridSpec grid;
};

struct EstimationResult {
  StratifiedPropensityFit propensity;
  std::vector<GlmFit> outcome_fits;
  DoseResponseSurface surface;
  EffectEstimates estimates;
  // G values of kept units: the empirical distribution the scalar
  // estimands average over (the post-trim analysis population).
  std::vector<double> kept_g;
};

// phi fit -> overlap trim -> subclassification -> per-stratum GPS ->
// per-stratum outcome models -> surface -> estimands.
EstimationResult run_estimation(const AnalysisTable& table,
                                const EstimationConfig& config);

}  // namespace bipartite
