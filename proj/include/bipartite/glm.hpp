#pragma once

#include <span>
#include <string>
#include <vector>

namespace bipartite {

enum class GlmFamily { logistic, normal_linear, poisson_offset };

const char* glm_family_name(GlmFamily f);

// Column-major design; predictors only, the intercept is implicit.
struct DesignMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::size_t n_rows = 0;

  void add_column(std::string name, std::vector<double> values);
};

struct GlmSpec {
  GlmFamily family = GlmFamily::normal_linear;
  // Convergence contract: max |score| < score_tol or relative deviance
  // change < deviance_tol, at most max_iterations IRLS steps with up to
  // max_step_halvings halvings per step.
  double score_tol = 1e-8;
  double deviance_tol = 1e-10;
  int max_iterations = 100;
  int max_step_halvings = 10;
};

struct GlmFit {
  GlmFamily family = GlmFamily::normal_linear;
  std::vector<std::string> predictor_names;
  // Original-scale coefficients, intercept first.
  std::vector<double> coefficients;
  // sigma^2 = RSS / (n - p), normal family only.
  double residual_variance = 0.0;
  bool converged = false;
  bool separation = false;  // logistic: perfect/quasi separation detected
  int iterations = 0;
  double max_abs_score = 0.0;  // on the internal standardized design
  double deviance = 0.0;
  std::vector<double> deviance_trace;  // one entry per accepted IRLS step
  // Standardization bookkeeping (per predictor column).
  std::vector<double> column_means;
  std::vector<double> column_sds;

  std::size_t n_predictors() const { return predictor_names.size(); }
  double linear_predictor(std::span<const double> x) const;
};

// Maximum-likelihood fit via iteratively reweighted least squares.
// Predictors are z-scored internally; coefficients are reported on the
// original scale. offset is required iff family == poisson_offset (log
// exposure). Zero-variance or collinear predictor columns raise
// SingularDesign; perfect separation is flagged, not fatal.
GlmFit fit_glm(const GlmSpec& spec, const DesignMatrix& design,
               std::span<const double> response,
               std::span<const double> offset = {});

// P(Z=1|x) from a logistic fit, clamped to [1e-12, 1-1e-12].
double predict_probability(const GlmFit& fit, std::span<const double> x);

// Normal density of g given mean x'beta and the fit's residual variance;
// the generalized propensity score evaluated at a (possibly
// counterfactual) exposure level. Floored at 1e-300.
double gps_density(const GlmFit& fit, std::span<const double> x, double g);

// Fitted mean: exp(x'beta + offset) for Poisson, x'beta for normal.
double predict_mean(const GlmFit& fit, std::span<const double> x,
                    double offset = 0.0);

}  // namespace bipartite
