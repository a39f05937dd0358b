#include "bipartite/propensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bipartite/error.hpp"
#include "bipartite/log.hpp"
#include "bipartite/stats.hpp"

namespace bipartite {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Group min/max (and optional alpha-quantiles) of phi within one Z level.
struct GroupRange {
  double lo, hi;
  std::size_t count;
};

GroupRange group_range(std::span<const double> phi, std::span<const double> z,
                       bool treated, double alpha) {
  std::vector<double> values;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if ((z[i] > 0.5) == treated) values.push_back(phi[i]);
  if (values.empty())
    raise(Errc::empty_after_trim,
          std::string("no units with Z=") + (treated ? "1" : "0"));
  std::sort(values.begin(), values.end());
  if (alpha > 0.0)
    return {quantile_midpoint(values, alpha),
            quantile_midpoint(values, 1.0 - alpha), values.size()};
  return {values.front(), values.back(), values.size()};
}

}  // namespace

KeyPsFit fit_key_ps(const AnalysisTable& table) {
  bool any0 = false, any1 = false;
  for (double v : table.z) (v > 0.5 ? any1 : any0) = true;
  if (!any0 || !any1)
    raise(Errc::separation, std::string("key-associated treatment is constant (all Z=") +
                                (any1 ? "1" : "0") + ")");
  if (table.x_z.cols.empty())
    raise(Errc::config_error,
          "schema roles x_int_z and x_out_z are both empty");

  DesignMatrix design;
  for (std::size_t c = 0; c < table.x_z.cols.size(); ++c)
    design.add_column(table.x_z.names[c], table.x_z.cols[c]);

  GlmSpec spec;
  spec.family = GlmFamily::logistic;
  KeyPsFit out;
  out.fit = fit_glm(spec, design, table.z);
  if (out.fit.separation)
    BIP_LOG_WARN("key-associated propensity model shows separation; "
                 "fitted probabilities clamped, fit flagged nonconverged");

  out.phi_hat.resize(table.n);
  std::vector<double> x(design.cols.size());
  for (std::size_t i = 0; i < table.n; ++i) {
    for (std::size_t c = 0; c < design.cols.size(); ++c)
      x[c] = design.cols[c][i];
    out.phi_hat[i] = predict_probability(out.fit, x);
  }
  return out;
}

std::vector<std::uint8_t> trim_overlap(std::span<const double> phi_hat,
                                       std::span<const double> z,
                                       const TrimRule& rule,
                                       TrimBounds* bounds_out) {
  if (phi_hat.size() != z.size())
    raise(Errc::length_mismatch, "phi/z length mismatch");
  TrimBounds bounds{-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
  if (rule.kind != TrimRule::Kind::none) {
    const double alpha = rule.kind == TrimRule::Kind::quantile ? rule.alpha : 0.0;
    if (alpha < 0.0 || alpha > 0.05)
      raise(Errc::config_error, "trim alpha must lie in [0, 0.05]");
    const GroupRange r1 = group_range(phi_hat, z, true, alpha);
    const GroupRange r0 = group_range(phi_hat, z, false, alpha);
    bounds.lo = std::max(r1.lo, r0.lo);
    bounds.hi = std::min(r1.hi, r0.hi);
  }
  std::vector<std::uint8_t> kept(phi_hat.size(), 0);
  std::size_t kept0 = 0, kept1 = 0;
  for (std::size_t i = 0; i < phi_hat.size(); ++i) {
    if (phi_hat[i] >= bounds.lo && phi_hat[i] <= bounds.hi) {
      kept[i] = 1;
      (z[i] > 0.5 ? kept1 : kept0) += 1;
    }
  }
  if (kept0 == 0 || kept1 == 0)
    raise(Errc::empty_after_trim,
          "overlap trimming removed every unit with Z=" +
              std::string(kept1 == 0 ? "1" : "0"));
  if (bounds_out != nullptr) *bounds_out = bounds;
  return kept;
}

std::vector<std::uint32_t> Subclassification::members(int k) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < stratum.size(); ++i)
    if (stratum[i] == k) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

Subclassification subclassify(std::span<const double> phi_hat,
                              std::span<const double> z,
                              std::span<const std::uint8_t> kept, int n_strata,
                              bool quantiles_on_treated) {
  if (n_strata < 2) raise(Errc::config_error, "n_strata must be >= 2");
  if (phi_hat.size() != z.size() || phi_hat.size() != kept.size())
    raise(Errc::length_mismatch, "phi/z/kept length mismatch");

  std::vector<double> pool;
  for (std::size_t i = 0; i < phi_hat.size(); ++i) {
    if (!kept[i]) continue;
    if (!quantiles_on_treated || z[i] > 0.5) pool.push_back(phi_hat[i]);
  }
  std::sort(pool.begin(), pool.end());
  std::size_t distinct = pool.empty() ? 0 : 1;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (pool[i] != pool[i - 1]) ++distinct;
  if (distinct < static_cast<std::size_t>(n_strata))
    raise(Errc::degenerate_quantiles,
          "only " + std::to_string(distinct) +
              " distinct propensity values for " + std::to_string(n_strata) +
              " strata");

  Subclassification sub;
  sub.n_strata = n_strata;
  sub.cutpoints.reserve(n_strata - 1);
  for (int k = 1; k < n_strata; ++k)
    sub.cutpoints.push_back(quantile_midpoint(
        pool, static_cast<double>(k) / static_cast<double>(n_strata)));
  for (std::size_t k = 1; k < sub.cutpoints.size(); ++k)
    if (!(sub.cutpoints[k] > sub.cutpoints[k - 1]))
      raise(Errc::degenerate_quantiles,
            "quantile ties collapse cutpoints " + std::to_string(k) + " and " +
                std::to_string(k + 1) + " (both " +
                std::to_string(sub.cutpoints[k]) + ")");

  sub.stratum.assign(phi_hat.size(), 0);
  sub.stratum_sizes.assign(n_strata, 0);
  for (std::size_t i = 0; i < phi_hat.size(); ++i) {
    if (!kept[i]) continue;
    int k = 1;
    for (double c : sub.cutpoints)
      if (phi_hat[i] >= c) ++k;  // left-closed intervals, last right-closed
    sub.stratum[i] = k;
    sub.stratum_sizes[k - 1] += 1;
    ++sub.n_kept;
  }
  sub.stratum_weights.resize(n_strata);
  for (int k = 0; k < n_strata; ++k)
    sub.stratum_weights[k] = static_cast<double>(sub.stratum_sizes[k]) /
                             static_cast<double>(sub.n_kept);
  return sub;
}

std::vector<BalanceRow> balance_table(const AnalysisTable& table,
                                      std::span<const std::uint8_t> kept,
                                      const Subclassification& strata) {
  const int K = strata.n_strata;

  const auto smd_of = [](std::span<const double> x, std::span<const double> z,
                         std::span<const std::uint32_t> rows, bool* zero_var) {
    std::vector<double> x0, x1;
    for (std::uint32_t i : rows)
      (z[i] > 0.5 ? x1 : x0).push_back(x[i]);
    if (x0.empty() || x1.empty()) return kNaN;
    const double m0 = mean(x0), m1 = mean(x1);
    const double pooled = 0.5 * (sample_variance(x0) + sample_variance(x1));
    if (pooled <= 0.0) {
      if (zero_var != nullptr) *zero_var = true;
      if (m1 == m0) return 0.0;
      return m1 > m0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
    }
    return (m1 - m0) / std::sqrt(pooled);
  };

  std::vector<std::uint32_t> kept_rows;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i]) kept_rows.push_back(static_cast<std::uint32_t>(i));

  std::vector<std::vector<std::uint32_t>> stratum_rows(K);
  for (int k = 1; k <= K; ++k) stratum_rows[k - 1] = strata.members(k);

  std::vector<BalanceRow> out;
  out.reserve(table.x_z.cols.size());
  for (std::size_t c = 0; c < table.x_z.cols.size(); ++c) {
    BalanceRow row;
    row.name = table.x_z.names[c];
    row.smd_unadjusted =
        smd_of(table.x_z.cols[c], table.z, kept_rows, &row.zero_variance);
    row.smd_stratum.resize(K);
    double avg = 0.0;
    for (int k = 0; k < K; ++k) {
      row.smd_stratum[k] =
          smd_of(table.x_z.cols[c], table.z, stratum_rows[k], &row.zero_variance);
      avg += strata.stratum_weights[k] * row.smd_stratum[k];
    }
    row.smd_stratum_avg = avg;  // NaN propagates if any stratum is one-sided
    out.push_back(std::move(row));
  }
  return out;
}

StratumGps fit_stratum_gps(const AnalysisTable& table,
                           std::span<const std::uint8_t> kept,
                           const Subclassification& strata) {
  StratumGps out;
  out.fits.resize(strata.n_strata);
  out.lambda_hat.assign(table.n, kNaN);

  for (int k = 1; k <= strata.n_strata; ++k) {
    const auto rows = strata.members(k);
    const std::size_t p = 1 + table.x_g.cols.size();
    if (rows.size() < p + 2)
      raise(Errc::stratum_too_small,
            "stratum " + std::to_string(k) + " has " +
                std::to_string(rows.size()) + " units, needs at least " +
                std::to_string(p + 2));

    DesignMatrix design;
    std::vector<double> zcol(rows.size()), gcol(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      zcol[r] = table.z[rows[r]];
      gcol[r] = table.g[rows[r]];
    }
    design.add_column("z", std::move(zcol));
    for (std::size_t c = 0; c < table.x_g.cols.size(); ++c) {
      std::vector<double> col(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        col[r] = table.x_g.cols[c][rows[r]];
      design.add_column(table.x_g.names[c], std::move(col));
    }

    GlmSpec spec;
    spec.family = GlmFamily::normal_linear;
    GlmFit fit;
    try {
      fit = fit_glm(spec, design, gcol);
    } catch (const Error& e) {
      raise(Errc::stratum_too_small,
            "stratum " + std::to_string(k) + ": " + e.what());
    }
    if (fit.residual_variance < 1e-12)
      raise(Errc::stratum_too_small,
            "stratum " + std::to_string(k) +
                ": upwind treatment variance below 1e-12 (G nearly constant)");

    std::vector<double> x(1 + table.x_g.cols.size());
    for (std::uint32_t i : rows) {
      x[0] = table.z[i];
      for (std::size_t c = 0; c < table.x_g.cols.size(); ++c)
        x[c + 1] = table.x_g.cols[c][i];
      out.lambda_hat[i] = gps_density(fit, x, table.g[i]);
    }
    out.fits[k - 1] = std::move(fit);
  }
  return out;
}

StratifiedPropensityFit fit_propensity(const AnalysisTable& table,
                                       const TrimRule& trim, int n_strata,
                                       bool quantiles_on_treated) {
  StratifiedPropensityFit out;
  out.key = fit_key_ps(table);
  out.kept = trim_overlap(out.key.phi_hat, table.z, trim, &out.bounds);
  out.n_trimmed = 0;
  for (auto f : out.kept)
    if (!f) ++out.n_trimmed;
  out.strata = subclassify(out.key.phi_hat, table.z, out.kept, n_strata,
                           quantiles_on_treated);
  out.gps = fit_stratum_gps(table, out.kept, out.strata);
  return out;
}

double joint_psi(const KeyPsFit& key, const GlmFit& gps_fit,
                 std::span<const double> x_z,
                 std::span<const double> x_g_with_z, double z, double g) {
  const double p1 = predict_probability(key.fit, x_z);
  const double phi = z > 0.5 ? p1 : 1.0 - p1;
  return phi * gps_density(gps_fit, x_g_with_z, g);
}

}  // namespace bipartite
