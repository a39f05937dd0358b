#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bipartite/data_model.hpp"

namespace bipartite {

// Per-outcome-unit derived treatments: the key-associated interventional
// unit j*, its treatment status Z, and the influence-weighted upwind
// treatment G (raw and rescaled by the sample maximum into [0,1]).
struct ExposureTable {
  std::vector<std::uint32_t> key_index;  // j* per outcome unit
  std::vector<int> z;
  std::vector<double> g_raw;
  std::vector<double> g;
  double g_raw_max = 0.0;

  std::size_t size() const { return key_index.size(); }
};

// Index of the maximal weight in a sparse row; ties break to the smallest
// interventional file-order index.
std::uint32_t key_associated_unit(
    std::span<const std::pair<std::uint32_t, double>> row);

// Derives (j*, Z, G*, G) for every outcome unit. Sums run in ascending
// interventional index so the sparse path reproduces a dense triple loop
// bit-for-bit; do not reorder or vectorize these loops.
ExposureTable derive_exposures(const BipartiteDataset& dataset);

// Observed G values, each carrying weight 1/n.
std::vector<double> empirical_g_distribution(const ExposureTable& exposures);

// Optional eligibility filter: keep outcome units whose total row weight
// exceeds the threshold. Applied before derivation.
BipartiteDataset filter_eligible(const BipartiteDataset& dataset,
                                 double min_total_weight);

void write_exposures_csv(const std::string& path,
                         const BipartiteDataset& dataset,
                         const ExposureTable& exposures);

}  // namespace bipartite
