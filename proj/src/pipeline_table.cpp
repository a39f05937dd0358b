#include <cmath>

#include "bipartite/analysis_table.hpp"
#include "bipartite/error.hpp"

namespace bipartite {

void ColumnBlock::gather_into(ColumnBlock& out,
                              std::span<const std::uint32_t> rows) const {
  out.names = names;
  out.cols.assign(cols.size(), {});
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.cols[c].resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.cols[c][r] = cols[c][rows[r]];
  }
}

AnalysisTable AnalysisTable::subset(std::span<const std::uint32_t> rows) const {
  AnalysisTable out;
  out.n = rows.size();
  out.family = family;
  out.ids.reserve(rows.size());
  out.z.resize(rows.size());
  out.g.resize(rows.size());
  out.y.resize(rows.size());
  out.log_offset.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::uint32_t i = rows[r];
    out.ids.push_back(ids[i]);
    out.z[r] = z[i];
    out.g[r] = g[i];
    out.y[r] = y[i];
    out.log_offset[r] = log_offset[i];
  }
  x_z.gather_into(out.x_z, rows);
  x_g.gather_into(out.x_g, rows);
  x_y.gather_into(out.x_y, rows);
  return out;
}

AnalysisTable build_analysis_table(const BipartiteDataset& ds,
                                   const ExposureTable& exposures) {
  if (exposures.size() != ds.n_outcome())
    raise(Errc::length_mismatch,
          "exposure table does not match dataset outcome units");
  const std::size_t n = ds.n_outcome();
  AnalysisTable t;
  t.n = n;
  t.family = ds.schema.family;
  t.ids.reserve(n);
  t.z.resize(n);
  t.g = exposures.g;
  t.y.resize(n);
  t.log_offset.assign(n, 0.0);
  const bool poisson = ds.schema.family == OutcomeFamily::poisson_offset;
  for (std::size_t i = 0; i < n; ++i) {
    t.ids.push_back(ds.outcome_units[i].id);
    t.z[i] = static_cast<double>(exposures.z[i]);
    t.y[i] = ds.outcome_units[i].outcome;
    if (poisson) t.log_offset[i] = std::log(ds.outcome_units[i].offset_exposure);
  }

  const auto add_int_cols = [&](ColumnBlock& block,
                                const std::vector<std::string>& names) {
    for (const auto& name : names) {
      const std::size_t c = ds.interventional_covariate_index(name);
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i)
        col[i] = ds.interventional_units[exposures.key_index[i]].covariates[c];
      block.names.push_back("int:" + name);
      block.cols.push_back(std::move(col));
    }
  };
  const auto add_out_cols = [&](ColumnBlock& block,
                                const std::vector<std::string>& names) {
    for (const auto& name : names) {
      const std::size_t c = ds.outcome_covariate_index(name);
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = ds.outcome_units[i].covariates[c];
      block.names.push_back("out:" + name);
      block.cols.push_back(std::move(col));
    }
  };

  add_int_cols(t.x_z, ds.schema.x_int_z);
  add_out_cols(t.x_z, ds.schema.x_out_z);
  add_int_cols(t.x_g, ds.schema.x_int_g);
  add_out_cols(t.x_g, ds.schema.x_out_g);
  add_out_cols(t.x_y, ds.schema.x_out_outcome);
  return t;
}

}  // namespace bipartite
