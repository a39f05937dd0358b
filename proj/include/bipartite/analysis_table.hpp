#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bipartite/data_model.hpp"
#include "bipartite/exposure.hpp"

namespace bipartite {

struct ColumnBlock {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;  // column-major, each length n

  void gather_into(ColumnBlock& out, std::span<const std::uint32_t> rows) const;
};

// Estimation-ready join of dataset, exposures, and covariate roles: one
// row per outcome unit with every model input materialized. Key-plant
// covariates are joined through j* here, so a bootstrap replicate is just
// a row multiset of this table — each unit's (Z, G, covariates, outcome)
// travel together as fixed node characteristics.
struct AnalysisTable {
  std::size_t n = 0;
  OutcomeFamily family = OutcomeFamily::poisson_offset;
  std::vector<std::string> ids;
  std::vector<double> z;
  std::vector<double> g;
  std::vector<double> y;
  std::vector<double> log_offset;  // log person-years; zeros for normal family
  ColumnBlock x_z;  // f^Z predictors: x_int_z via j*, then x_out_z
  ColumnBlock x_g;  // f^G predictors beyond Z
  ColumnBlock x_y;  // f^y predictors beyond (z, g, gps)

  AnalysisTable subset(std::span<const std::uint32_t> rows) const;
};

AnalysisTable build_analysis_table(const BipartiteDataset& dataset,
                                   const ExposureTable& exposures);

}  // namespace bipartite
