#include "bipartite/error.hpp"

namespace bipartite {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::non_binary_treatment: return "NonBinaryTreatment";
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::orphan_outcome_unit: return "OrphanOutcomeUnit";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::unknown_id: return "UnknownId";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::bad_format: return "BadFormat";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
    case Errc::empty_row: return "EmptyRow";
    case Errc::singular_design: return "SingularDesign";
    case Errc::separation: return "Separation";
    case Errc::nonconvergence: return "Nonconvergence";
    case Errc::empty_after_trim: return "EmptyAfterTrim";
    case Errc::degenerate_quantiles: return "DegenerateQuantiles";
    case Errc::stratum_too_small: return "StratumTooSmall";
    case Errc::too_many_failures: return "TooManyFailures";
  }
  return "Unknown";
}

const char* errc_module(Errc c) {
  switch (c) {
    case Errc::missing_column:
    case Errc::non_binary_treatment:
    case Errc::negative_weight:
    case Errc::orphan_outcome_unit:
    case Errc::dimension_mismatch:
    case Errc::unknown_id:
    case Errc::duplicate_id:
    case Errc::bad_format:
      return "data_model";
    case Errc::length_mismatch:
    case Errc::zero_variance:
    case Errc::singular_design:
    case Errc::separation:
    case Errc::nonconvergence:
      return "glm";
    case Errc::config_error:
    case Errc::io_error:
      return "cli";
    case Errc::empty_row:
      return "exposure";
    case Errc::empty_after_trim:
    case Errc::degenerate_quantiles:
    case Errc::stratum_too_small:
      return "propensity";
    case Errc::too_many_failures:
      return "bootstrap";
  }
  return "bipartite";
}

bool is_validation_error(Errc c) {
  switch (c) {
    case Errc::missing_column:
    case Errc::non_binary_treatment:
    case Errc::negative_weight:
    case Errc::orphan_outcome_unit:
    case Errc::dimension_mismatch:
    case Errc::unknown_id:
    case Errc::duplicate_id:
    case Errc::bad_format:
    case Errc::length_mismatch:
    case Errc::zero_variance:
    case Errc::config_error:
    case Errc::io_error:
      return true;
    default:
      return false;
  }
}

}  // namespace bipartite
