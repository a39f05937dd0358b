#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace bipartite {

struct ExposureTable;  // exposure.hpp

// "Interventional" units carry the binary treatment (the paper's power
// plants); "outcome" units carry the response (the paper's ZIP codes).
// The two sides are linked by a sparse nonnegative influence matrix.

struct InterventionalUnit {
  std::string id;
  int treated = 0;  // exactly 0 or 1
  std::vector<double> covariates;
};

struct OutcomeUnit {
  std::string id;
  double outcome = 0.0;
  double offset_exposure = 1.0;  // person-years at risk; > 0
  std::vector<double> covariates;
};

struct InterferenceMap {
  std::size_t n_outcome = 0;
  std::size_t n_interventional = 0;
  // Row i holds (interventional index, weight) pairs, ascending index,
  // weights strictly positive; zeros are represented by absence.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  double row_total(std::size_t i) const;
  // Dense N x J materialization (row-major), for small instances/tests.
  std::vector<double> dense() const;
};

enum class OutcomeFamily { poisson_offset, normal_linear };

const char* family_name(OutcomeFamily f);
OutcomeFamily family_from_name(const std::string& name);

// Which covariates enter which model. Names must exist in the dataset's
// declared covariate schemas; roles are declared, never inferred.
struct CovariateSchema {
  std::vector<std::string> x_int_z;        // key-plant covariates in f^Z
  std::vector<std::string> x_out_z;        // outcome-unit covariates in f^Z
  std::vector<std::string> x_int_g;        // key-plant covariates in f^G
  std::vector<std::string> x_out_g;        // outcome-unit covariates in f^G
  std::vector<std::string> x_out_outcome;  // outcome-unit covariates in f^y
  OutcomeFamily family = OutcomeFamily::poisson_offset;
};

struct BipartiteDataset {
  std::vector<InterventionalUnit> interventional_units;
  std::vector<OutcomeUnit> outcome_units;
  InterferenceMap interference;
  std::vector<std::string> interventional_covariate_names;
  std::vector<std::string> outcome_covariate_names;
  CovariateSchema schema;

  std::size_t n_outcome() const { return outcome_units.size(); }
  std::size_t n_interventional() const { return interventional_units.size(); }
  std::size_t interventional_covariate_index(const std::string& name) const;
  std::size_t outcome_covariate_index(const std::string& name) const;

  // Checks every structural invariant; throws on the first violation.
  void validate() const;
};

BipartiteDataset load_dataset(const std::string& interventional_path,
                              const std::string& outcome_path,
                              const std::string& interference_path,
                              const CovariateSchema& schema);

void write_dataset(const BipartiteDataset& dataset,
                   const std::string& interventional_path,
                   const std::string& outcome_path,
                   const std::string& interference_path);

// One row of the covariate summary across levels of Z (the layout used
// for the balance reporting table, with a leading row for G itself).
struct TreatmentSummaryRow {
  std::string name;
  bool interventional_side = false;  // key-plant covariate vs outcome-unit
  double mean_z0 = 0.0, mean_z1 = 0.0;
  std::size_t n_z0 = 0, n_z1 = 0;  // empty group => mean is NaN
};

std::vector<TreatmentSummaryRow> summarize_by_treatment(
    const BipartiteDataset& dataset, const ExposureTable& exposures);

void write_treatment_summary_csv(const std::string& path,
                                 const std::vector<TreatmentSummaryRow>& rows);

}  // namespace bipartite
