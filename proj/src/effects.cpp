#include "bipartite/effects.hpp"

#include <cmath>

#include "bipartite/error.hpp"
#include "bipartite/kernels.hpp"

namespace bipartite {

std::vector<GlmFit> fit_outcome_models(const AnalysisTable& table,
                                       const StratifiedPropensityFit& sp) {
  const bool poisson = table.family == OutcomeFamily::poisson_offset;
  std::vector<GlmFit> fits(sp.strata.n_strata);

  for (int k = 1; k <= sp.strata.n_strata; ++k) {
    const auto rows = sp.strata.members(k);
    const std::size_t p = 3 + table.x_y.cols.size();
    if (rows.size() < p + 2)
      raise(Errc::stratum_too_small,
            "stratum " + std::to_string(k) + " has " +
                std::to_string(rows.size()) + " units, outcome model needs " +
                std::to_string(p + 2));

    DesignMatrix design;
    std::vector<double> zcol(rows.size()), gcol(rows.size()), lcol(rows.size());
    std::vector<double> y(rows.size()), offset;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::uint32_t i = rows[r];
      zcol[r] = table.z[i];
      gcol[r] = table.g[i];
      lcol[r] = sp.gps.lambda_hat[i];
      y[r] = table.y[i];
    }
    design.add_column("z", std::move(zcol));
    design.add_column("g", std::move(gcol));
    design.add_column("gps", std::move(lcol));
    for (std::size_t c = 0; c < table.x_y.cols.size(); ++c) {
      std::vector<double> col(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        col[r] = table.x_y.cols[c][rows[r]];
      design.add_column(table.x_y.names[c], std::move(col));
    }
    if (poisson) {
      offset.resize(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        offset[r] = table.log_offset[rows[r]];
    }

    GlmSpec spec;
    spec.family = poisson ? GlmFamily::poisson_offset : GlmFamily::normal_linear;
    try {
      fits[k - 1] = fit_glm(spec, design, y, offset);
    } catch (const Error& e) {
      raise(Errc::stratum_too_small,
            "stratum " + std::to_string(k) + " outcome model: " + e.what());
    }
  }
  return fits;
}

DoseResponseSurface predict_surface(const std::vector<GlmFit>& outcome_fits,
                                    const StratifiedPropensityFit& sp,
                                    const AnalysisTable& table,
                                    const GridSpec& grid) {
  const int K = sp.strata.n_strata;
  if (static_cast<int>(outcome_fits.size()) != K)
    raise(Errc::length_mismatch, "outcome fit count != stratum count");
  const bool poisson = table.family == OutcomeFamily::poisson_offset;

  DoseResponseSurface surf;
  surf.g_grid = grid.points();
  surf.n_strata = K;
  surf.stratum_weights = sp.strata.stratum_weights;
  surf.scale = poisson ? SurfaceScale::rate_per_10k : SurfaceScale::outcome_native;
  const std::size_t m = surf.g_grid.size();
  surf.mu_strata.assign(2, std::vector<std::vector<double>>(
                               K, std::vector<double>(m, 0.0)));
  surf.mu_pooled.assign(2, std::vector<double>(m, 0.0));
  surf.g_observed_min.assign(K, 0.0);
  surf.g_observed_max.assign(K, 0.0);
  surf.extrapolation_fraction.assign(K, 0.0);

  const double log_rate_denom = std::log(kRateDenominator);
  const std::size_t n_xg = table.x_g.cols.size();
  const std::size_t n_xy = table.x_y.cols.size();

  for (int k = 1; k <= K; ++k) {
    const auto rows = sp.strata.members(k);
    const std::size_t nk = rows.size();
    const GlmFit& gfit = sp.gps.fits[k - 1];
    const GlmFit& yfit = outcome_fits[k - 1];

    // f^G mean is affine in z: mean_i(z) = gps_base_i + dz * z.
    const double dz = gfit.coefficients[1];
    std::vector<double> gps_base(nk);
    for (std::size_t r = 0; r < nk; ++r) {
      const std::uint32_t i = rows[r];
      double v = gfit.coefficients[0];
      for (std::size_t c = 0; c < n_xg; ++c)
        v += gfit.coefficients[2 + c] * table.x_g.cols[c][i];
      gps_base[r] = v;
    }
    const double var = gfit.residual_variance;
    const double inv_two_var = -0.5 / var;
    const double inv_norm = 1.0 / std::sqrt(6.283185307179586476925286766559 * var);

    // f^y linear predictor: ybase_i + tz*z + tg*g + tl*lambda(z,g).
    const double tz = yfit.coefficients[1];
    const double tg = yfit.coefficients[2];
    const double tl = yfit.coefficients[3];
    std::vector<double> ybase(nk);
    for (std::size_t r = 0; r < nk; ++r) {
      const std::uint32_t i = rows[r];
      double v = yfit.coefficients[0];
      for (std::size_t c = 0; c < n_xy; ++c)
        v += yfit.coefficients[4 + c] * table.x_y.cols[c][i];
      if (poisson) v += log_rate_denom;  // common rate denominator
      ybase[r] = v;
    }

    double gmin = table.g[rows[0]], gmax = table.g[rows[0]];
    for (std::uint32_t i : rows) {
      gmin = std::min(gmin, table.g[i]);
      gmax = std::max(gmax, table.g[i]);
    }
    surf.g_observed_min[k - 1] = gmin;
    surf.g_observed_max[k - 1] = gmax;
    std::size_t outside = 0;
    for (double gv : surf.g_grid)
      if (gv < gmin || gv > gmax) ++outside;
    surf.extrapolation_fraction[k - 1] =
        static_cast<double>(outside) / static_cast<double>(m);

    std::vector<double> q(nk), lambda(nk), eta(nk), pred(nk);
    for (int zi = 0; zi < 2; ++zi) {
      const double z = static_cast<double>(zi);
      for (std::size_t gi = 0; gi < m; ++gi) {
        const double g = surf.g_grid[gi];
        for (std::size_t r = 0; r < nk; ++r) {
          const double d = g - (gps_base[r] + dz * z);
          q[r] = d * d * inv_two_var;
        }
        kernels::exp_vec(q.data(), lambda.data(), nk);
        for (std::size_t r = 0; r < nk; ++r)
          lambda[r] = std::max(lambda[r] * inv_norm, 1e-300);
        const double zg_term = tz * z + tg * g;
        for (std::size_t r = 0; r < nk; ++r)
          eta[r] = ybase[r] + zg_term + tl * lambda[r];
        if (poisson) {
          kernels::exp_vec(eta.data(), pred.data(), nk);
        } else {
          pred = eta;
        }
        surf.mu_strata[zi][k - 1][gi] =
            kernels::sum(pred.data(), nk) / static_cast<double>(nk);
      }
    }
  }

  for (int zi = 0; zi < 2; ++zi)
    for (std::size_t gi = 0; gi < m; ++gi) {
      double pooled = 0.0;
      for (int k = 0; k < K; ++k)
        pooled += surf.stratum_weights[k] * surf.mu_strata[zi][k][gi];
      surf.mu_pooled[zi][gi] = pooled;
    }
  return surf;
}

EffectEstimates estimands(const DoseResponseSurface& surface,
                          std::span<const double> g_values) {
  if (g_values.empty())
    raise(Errc::length_mismatch, "estimands need a nonempty G distribution");
  EffectEstimates est;
  est.g_grid = surface.g_grid;
  const std::size_t m = est.g_grid.size();
  est.tau_of_g.resize(m);
  est.delta_of_g_z0.resize(m);
  est.delta_of_g_z1.resize(m);
  const auto& mu0 = surface.mu_pooled[0];
  const auto& mu1 = surface.mu_pooled[1];
  // mu(z, g=0) baseline; bit-exact when 0 is a grid point.
  const double mu0_at0 = linear_interp(est.g_grid, mu0, 0.0);
  const double mu1_at0 = linear_interp(est.g_grid, mu1, 0.0);
  for (std::size_t gi = 0; gi < m; ++gi) {
    est.tau_of_g[gi] = mu1[gi] - mu0[gi];
    est.delta_of_g_z0[gi] = mu0[gi] - mu0_at0;
    est.delta_of_g_z1[gi] = mu1[gi] - mu1_at0;
  }
  double tau_sum = 0.0, d0_sum = 0.0, d1_sum = 0.0;
  for (double g : g_values) {
    tau_sum += linear_interp(est.g_grid, est.tau_of_g, g);
    d0_sum += linear_interp(est.g_grid, est.delta_of_g_z0, g);
    d1_sum += linear_interp(est.g_grid, est.delta_of_g_z1, g);
  }
  const double n = static_cast<double>(g_values.size());
  est.tau = tau_sum / n;
  est.delta0 = d0_sum / n;
  est.delta1 = d1_sum / n;
  return est;
}

}  // namespace bipartite
