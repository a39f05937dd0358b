#include "bipartite/exposure.hpp"

#include "bipartite/csv.hpp"
#include "bipartite/error.hpp"

namespace bipartite {

std::uint32_t key_associated_unit(
    std::span<const std::pair<std::uint32_t, double>> row) {
  if (row.empty()) raise(Errc::empty_row, "empty interference row");
  std::uint32_t best = row[0].first;
  double best_w = row[0].second;
  for (const auto& [j, w] : row.subspan(1)) {
    // Strictly greater: ascending-index rows make this the smallest index
    // among tied maxima.
    if (w > best_w) {
      best = j;
      best_w = w;
    }
  }
  return best;
}

ExposureTable derive_exposures(const BipartiteDataset& ds) {
  const std::size_t n = ds.n_outcome();
  ExposureTable table;
  table.key_index.resize(n);
  table.z.resize(n);
  table.g_raw.resize(n);
  table.g.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = ds.interference.rows[i];
    if (row.empty())
      raise(Errc::orphan_outcome_unit,
            "outcome unit '" + ds.outcome_units[i].id +
                "' has no interference entries");
    const std::uint32_t jstar = key_associated_unit(row);
    table.key_index[i] = jstar;
    table.z[i] = ds.interventional_units[jstar].treated;
    // G* = sum over j != j* of t_ij * S_j, ascending j.
    double g_raw = 0.0;
    for (const auto& [j, w] : row) {
      if (j == jstar) continue;
      g_raw += w * static_cast<double>(ds.interventional_units[j].treated);
    }
    table.g_raw[i] = g_raw;
  }

  double g_max = 0.0;
  for (double v : table.g_raw)
    if (v > g_max) g_max = v;
  table.g_raw_max = g_max;
  if (g_max > 0.0) {
    for (std::size_t i = 0; i < n; ++i) table.g[i] = table.g_raw[i] / g_max;
  } else {
    // No upwind treated units anywhere; G is identically zero.
    for (std::size_t i = 0; i < n; ++i) table.g[i] = 0.0;
  }
  return table;
}

std::vector<double> empirical_g_distribution(const ExposureTable& exposures) {
  if (exposures.size() == 0)
    raise(Errc::length_mismatch, "empty exposure table");
  return exposures.g;
}

BipartiteDataset filter_eligible(const BipartiteDataset& ds,
                                 double min_total_weight) {
  if (min_total_weight <= 0.0) return ds;
  BipartiteDataset out;
  out.interventional_units = ds.interventional_units;
  out.interventional_covariate_names = ds.interventional_covariate_names;
  out.outcome_covariate_names = ds.outcome_covariate_names;
  out.schema = ds.schema;
  out.interference.n_interventional = ds.interference.n_interventional;
  for (std::size_t i = 0; i < ds.n_outcome(); ++i) {
    if (ds.interference.row_total(i) > min_total_weight) {
      out.outcome_units.push_back(ds.outcome_units[i]);
      out.interference.rows.push_back(ds.interference.rows[i]);
    }
  }
  out.interference.n_outcome = out.outcome_units.size();
  if (out.outcome_units.empty())
    raise(Errc::config_error,
          "eligibility threshold " + format_double(min_total_weight) +
              " removes every outcome unit");
  return out;
}

void write_exposures_csv(const std::string& path, const BipartiteDataset& ds,
                         const ExposureTable& exposures) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(exposures.size());
  for (std::size_t i = 0; i < exposures.size(); ++i) {
    rows.push_back({ds.outcome_units[i].id,
                    ds.interventional_units[exposures.key_index[i]].id,
                    std::to_string(exposures.z[i]),
                    format_double(exposures.g_raw[i]),
                    format_double(exposures.g[i])});
  }
  write_csv(path, {"outcome_id", "key_associated_id", "z", "g_raw", "g"}, rows);
}

}  // namespace bipartite
