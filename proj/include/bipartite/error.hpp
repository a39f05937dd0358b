#pragma once

#include <stdexcept>
#include <string>

namespace bipartite {

// Stable machine-readable failure codes, surfaced by the CLI as
// "<module>.<code>" in error JSON.
enum class Errc {
  // data / config validation (CLI exit 1)
  missing_column,
  non_binary_treatment,
  negative_weight,
  orphan_outcome_unit,
  dimension_mismatch,
  unknown_id,
  duplicate_id,
  bad_format,
  length_mismatch,
  zero_variance,
  config_error,
  io_error,
  // estimation failures (CLI exit 2)
  empty_row,
  singular_design,
  separation,
  nonconvergence,
  empty_after_trim,
  degenerate_quantiles,
  stratum_too_small,
  too_many_failures,
};

const char* errc_name(Errc c);
const char* errc_module(Errc c);
bool is_validation_error(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bipartite
