#include "bipartite/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bipartite/error.hpp"
#include "bipartite/log.hpp"
#include "bipartite/rng.hpp"
#include "bipartite/stats.hpp"

namespace bipartite {

namespace {

// Flattened replicate statistic: [tau, delta0, delta1,
// mu0(grid), mu1(grid), tau(grid), delta0(grid), delta1(grid)].
std::vector<double> flatten(const EstimationResult& res) {
  const auto& est = res.estimates;
  std::vector<double> out;
  out.reserve(3 + 5 * est.g_grid.size());
  out.push_back(est.tau);
  out.push_back(est.delta0);
  out.push_back(est.delta1);
  const auto append = [&out](const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
  };
  append(res.surface.mu_pooled[0]);
  append(res.surface.mu_pooled[1]);
  append(est.tau_of_g);
  append(est.delta_of_g_z0);
  append(est.delta_of_g_z1);
  return out;
}

}  // namespace

BootstrapResult egocentric_bootstrap(const AnalysisTable& table,
                                     const EstimationConfig& config,
                                     const BootstrapConfig& bcfg) {
  if (bcfg.replicates < 2)
    raise(Errc::config_error, "bootstrap needs at least 2 replicates");
  if (!(bcfg.ci_level > 0.0 && bcfg.ci_level < 1.0))
    raise(Errc::config_error, "ci_level must lie in (0, 1)");

  // Point estimates come from the original sample; if this throws there
  // is nothing to bootstrap.
  const EstimationResult original = run_estimation(table, config);
  const std::vector<double> point = flatten(original);

  const int B = bcfg.replicates;
  const std::size_t n = table.n;
  std::vector<std::vector<double>> replicate_stats(B);
  std::vector<std::string> failures(B);
  std::vector<std::uint8_t> ok(B, 0);

  const auto run_replicate = [&](int r) {
    Rng rng(bcfg.seed, static_cast<std::uint64_t>(r) + 1);
    std::vector<std::uint32_t> rows(n);
    for (std::size_t i = 0; i < n; ++i)
      rows[i] = static_cast<std::uint32_t>(rng.uniform_index(n));
    try {
      const AnalysisTable resample = table.subset(rows);
      const EstimationResult res = run_estimation(resample, config);
      replicate_stats[r] = flatten(res);
      ok[r] = 1;
    } catch (const Error& e) {
      failures[r] = "replicate " + std::to_string(r) + ": " +
                    errc_name(e.code()) + ": " + e.what();
    } catch (const std::exception& e) {
      failures[r] = "replicate " + std::to_string(r) + ": " + e.what();
    }
  };

  const int jobs = std::max(1, bcfg.jobs);
  if (jobs == 1) {
    for (int r = 0; r < B; ++r) run_replicate(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
      workers.emplace_back([&]() {
        for (;;) {
          const int r = next.fetch_add(1, std::memory_order_relaxed);
          if (r >= B) return;
          run_replicate(r);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  BootstrapResult result;
  result.replicates = B;
  result.ci_level = bcfg.ci_level;
  result.g_grid = original.estimates.g_grid;
  for (int r = 0; r < B; ++r)
    if (!ok[r]) {
      ++result.n_failed;
      result.failures.push_back(failures[r]);
      BIP_LOG_DEBUG("bootstrap %s", failures[r].c_str());
    }
  if (static_cast<double>(result.n_failed) >
      bcfg.max_failure_rate * static_cast<double>(B))
    raise(Errc::too_many_failures,
          std::to_string(result.n_failed) + " of " + std::to_string(B) +
              " bootstrap replicates failed (rate above " +
              std::to_string(bcfg.max_failure_rate) + ")");

  // Percentile intervals per statistic, replicate order preserved until
  // the sort inside the quantile.
  const std::size_t dim = point.size();
  const double p_lo = (1.0 - bcfg.ci_level) / 2.0;
  const double p_hi = (1.0 + bcfg.ci_level) / 2.0;
  std::vector<CiInterval> intervals(dim);
  std::vector<double> column;
  column.reserve(B - result.n_failed);
  for (std::size_t d = 0; d < dim; ++d) {
    column.clear();
    for (int r = 0; r < B; ++r)
      if (ok[r]) column.push_back(replicate_stats[r][d]);
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    intervals[d].point = point[d];
    intervals[d].lo = quantile_midpoint(sorted, p_lo);
    intervals[d].hi = quantile_midpoint(sorted, p_hi);
    intervals[d].sd = sample_sd(column);
  }

  const std::size_t m = result.g_grid.size();
  result.tau = intervals[0];
  result.delta0 = intervals[1];
  result.delta1 = intervals[2];
  const auto slice = [&](std::size_t offset) {
    return std::vector<CiInterval>(intervals.begin() + offset,
                                   intervals.begin() + offset + m);
  };
  result.mu0 = slice(3);
  result.mu1 = slice(3 + m);
  result.tau_of_g = slice(3 + 2 * m);
  result.delta0_of_g = slice(3 + 3 * m);
  result.delta1_of_g = slice(3 + 4 * m);
  return result;
}

}  // namespace bipartite
