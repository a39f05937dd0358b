#include "bipartite/pipeline.hpp"

namespace bipartite {

EstimationResult run_estimation(const AnalysisTable& table,
                                const EstimationConfig& config) {
  EstimationResult res;
  res.propensity = fit_propensity(table, config.trim, config.n_strata,
                                  config.quantiles_on_treated);
  res.outcome_fits = fit_outcome_models(table, res.propensity);
  res.surface =
      predict_surface(res.outcome_fits, res.propensity, table, config.grid);
  res.kept_g.reserve(res.propensity.strata.n_kept);
  for (std::size_t i = 0; i < table.n; ++i)
    if (res.propensity.kept[i]) res.kept_g.push_back(table.g[i]);
  res.estimates = estimands(res.surface, res.kept_g);
  return res;
}

}  // namespace bipartite
