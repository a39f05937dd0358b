#include "bipartite/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bipartite/error.hpp"
#include "bipartite/rng.hpp"

namespace bipartite {

namespace {

void check_config(const SynthConfig& c) {
  if (c.n_interventional < 2)
    raise(Errc::config_error, "synth needs at least 2 interventional units");
  if (c.n_outcome < 1) raise(Errc::config_error, "synth needs outcome units");
  if (!(c.sigma_km > 0.0)) raise(Errc::config_error, "synth sigma must be > 0");
  if (!(c.extent_km > 0.0)) raise(Errc::config_error, "synth extent must be > 0");
  if (c.treatment_coefs.size() != c.n_int_covariates + 1)
    raise(Errc::config_error, "treatment_coefs must have length 1 + n_int_covariates");
  if (c.beta_x.size() != c.n_out_covariates)
    raise(Errc::config_error, "beta_x must have length n_out_covariates");
  if (c.n_out_covariates < 1 &&
      (c.confounding != 0.0 || c.beta_z_by_x1 != 0.0 || c.beta_g_by_x1 != 0.0))
    raise(Errc::config_error,
          "confounding/effect modification need an outcome covariate");
}

std::string padded_id(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i + 1);
  return buf;
}

}  // namespace

double plume_weight(double source_x, double source_y, double receptor_x,
                    double receptor_y, double emission, double sigma,
                    double drift_x, double drift_y) {
  const double dx = receptor_x - (source_x + drift_x);
  const double dy = receptor_y - (source_y + drift_y);
  return emission * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

SynthResult generate(const SynthConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  const std::size_t J = cfg.n_interventional;
  const std::size_t n = cfg.n_outcome;

  // Draw order is part of the determinism contract: source locations,
  // receptor locations, emissions, interventional covariates, treatment,
  // outcome covariates, offsets, outcomes.
  std::vector<double> sx(J), sy(J), rx(n), ry(n), emission(J);
  for (std::size_t j = 0; j < J; ++j) {
    sx[j] = rng.uniform() * cfg.extent_km;
    sy[j] = rng.uniform() * cfg.extent_km;
  }
  for (std::size_t i = 0; i < n; ++i) {
    rx[i] = rng.uniform() * cfg.extent_km;
    ry[i] = rng.uniform() * cfg.extent_km;
  }
  for (std::size_t j = 0; j < J; ++j)
    emission[j] = std::exp(rng.normal(cfg.emission_log_mean, cfg.emission_log_sd));

  SynthResult out;
  BipartiteDataset& ds = out.dataset;
  for (std::size_t c = 0; c < cfg.n_int_covariates; ++c)
    ds.interventional_covariate_names.push_back("int_x" + std::to_string(c + 1));
  for (std::size_t c = 0; c < cfg.n_out_covariates; ++c)
    ds.outcome_covariate_names.push_back("out_x" + std::to_string(c + 1));

  ds.interventional_units.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    auto& u = ds.interventional_units[j];
    u.id = padded_id("src", j, 4);
    u.covariates.resize(cfg.n_int_covariates);
    for (auto& v : u.covariates) v = rng.normal();
  }
  for (std::size_t j = 0; j < J; ++j) {
    auto& u = ds.interventional_units[j];
    double eta = cfg.treatment_coefs[0];
    for (std::size_t c = 0; c < cfg.n_int_covariates; ++c)
      eta += cfg.treatment_coefs[c + 1] * u.covariates[c];
    u.treated = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1 : 0;
  }

  // Plume kernel, thresholded at a fraction of the global maximum; every
  // receptor keeps its strongest source so no row goes empty.
  std::vector<double> weights(n * J);
  double w_max = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < J; ++j) {
      const double w = plume_weight(sx[j], sy[j], rx[i], ry[i], emission[j],
                                    cfg.sigma_km, cfg.drift_x_km, cfg.drift_y_km);
      weights[i * J + j] = w;
      w_max = std::max(w_max, w);
    }
  const double threshold = cfg.sparsity_rel_threshold * w_max;
  ds.interference.n_outcome = n;
  ds.interference.n_interventional = J;
  ds.interference.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = ds.interference.rows[i];
    std::size_t j_best = 0;
    for (std::size_t j = 0; j < J; ++j) {
      const double w = weights[i * J + j];
      if (w > weights[i * J + j_best]) j_best = j;
      if (w >= threshold && w > 0.0)
        row.emplace_back(static_cast<std::uint32_t>(j), w);
    }
    if (row.empty() && weights[i * J + j_best] > 0.0)
      row.emplace_back(static_cast<std::uint32_t>(j_best),
                       weights[i * J + j_best]);
  }

  ds.outcome_units.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.outcome_units[i].id = padded_id("rcp", i, 5);
    ds.outcome_units[i].covariates.assign(cfg.n_out_covariates, 0.0);
  }

  // (Z, G) derived exactly as consumers will derive them.
  const ExposureTable exposures = derive_exposures(ds);

  for (std::size_t i = 0; i < n; ++i) {
    auto& u = ds.outcome_units[i];
    for (std::size_t c = 0; c < cfg.n_out_covariates; ++c) u.covariates[c] = rng.normal();
    if (cfg.confounding != 0.0 && cfg.n_out_covariates > 0) {
      const auto& key = ds.interventional_units[exposures.key_index[i]];
      u.covariates[0] += cfg.confounding * key.covariates[0];
    }
  }

  const bool poisson = cfg.family == OutcomeFamily::poisson_offset;
  out.truth.family = cfg.family;
  out.truth.base.resize(n);
  out.truth.bz.resize(n);
  out.truth.bg.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& u = ds.outcome_units[i];
    double xb = cfg.beta0;
    for (std::size_t c = 0; c < cfg.n_out_covariates; ++c)
      xb += cfg.beta_x[c] * u.covariates[c];
    const double x1 = cfg.n_out_covariates > 0 ? u.covariates[0] : 0.0;
    const double bz = cfg.beta_z + cfg.beta_z_by_x1 * x1;
    const double bg = cfg.beta_g + cfg.beta_g_by_x1 * x1;
    out.truth.bz[i] = bz;
    out.truth.bg[i] = bg;

    if (poisson) {
      u.offset_exposure = std::exp(rng.normal(cfg.offset_log_mean, cfg.offset_log_sd));
      const double rate =
          std::exp(xb + bz * exposures.z[i] + bg * exposures.g[i]);
      u.outcome = static_cast<double>(rng.poisson(u.offset_exposure * rate));
      out.truth.base[i] = std::exp(xb);
    } else {
      u.offset_exposure = 1.0;
      const double mean_y = xb + bz * exposures.z[i] + bg * exposures.g[i];
      u.outcome = rng.normal(mean_y, cfg.normal_sd);
      out.truth.base[i] = xb;
    }
  }

  CovariateSchema schema;
  schema.family = cfg.family;
  schema.x_int_z = ds.interventional_covariate_names;
  schema.x_out_z = ds.outcome_covariate_names;
  schema.x_out_g = ds.outcome_covariate_names;
  schema.x_out_outcome = ds.outcome_covariate_names;
  ds.schema = schema;

  ds.validate();
  return out;
}

double GroundTruth::true_mu(double z, double g) const {
  const std::size_t n = base.size();
  double s = 0.0;
  if (family == OutcomeFamily::poisson_offset) {
    for (std::size_t i = 0; i < n; ++i)
      s += base[i] * std::exp(bz[i] * z + bg[i] * g);
    return rate_denominator * s / static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) s += base[i] + bz[i] * z + bg[i] * g;
  return s / static_cast<double>(n);
}

TrueEstimands true_estimands(const GroundTruth& truth,
                             std::span<const double> g_values,
                             const GridSpec& grid) {
  TrueEstimands est;
  est.g_grid = grid.points();
  const std::size_t m = est.g_grid.size();
  std::vector<double> mu0(m), mu1(m);
  for (std::size_t gi = 0; gi < m; ++gi) {
    mu0[gi] = truth.true_mu(0.0, est.g_grid[gi]);
    mu1[gi] = truth.true_mu(1.0, est.g_grid[gi]);
  }
  est.tau_of_g.resize(m);
  for (std::size_t gi = 0; gi < m; ++gi) est.tau_of_g[gi] = mu1[gi] - mu0[gi];
  const double mu0_at0 = linear_interp(est.g_grid, mu0, 0.0);
  const double mu1_at0 = linear_interp(est.g_grid, mu1, 0.0);
  double tau_sum = 0.0, d0_sum = 0.0, d1_sum = 0.0;
  for (double g : g_values) {
    tau_sum += linear_interp(est.g_grid, est.tau_of_g, g);
    d0_sum += linear_interp(est.g_grid, mu0, g) - mu0_at0;
    d1_sum += linear_interp(est.g_grid, mu1, g) - mu1_at0;
  }
  const double n = static_cast<double>(g_values.size());
  est.tau = tau_sum / n;
  est.delta0 = d0_sum / n;
  est.delta1 = d1_sum / n;
  return est;
}

}  // namespace bipartite
