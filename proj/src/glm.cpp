#include "bipartite/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bipartite/error.hpp"
#include "bipartite/kernels.hpp"
#include "bipartite/log.hpp"

namespace bipartite {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Cholesky solve of the symmetric positive-definite p x p system A x = b.
// A is row-major and is destroyed. Returns false when a pivot collapses
// (rank deficiency).
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b,
                    std::size_t p) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    max_diag = std::max(max_diag, std::fabs(a[i * p + i]));
  const double tol = std::max(max_diag, 1.0) * 1e-12;
  for (std::size_t j = 0; j < p; ++j) {
    double d = a[j * p + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * p + k] * a[j * p + k];
    if (!(d > tol * 1e-3) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a[j * p + j] = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
      a[i * p + j] = s / ljj;
    }
  }
  // Forward then backward substitution.
  for (std::size_t i = 0; i < p; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * p + k] * b[k];
    b[i] = s / a[i * p + i];
  }
  for (std::size_t ii = p; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < p; ++k) s -= a[k * p + ii] * b[k];
    b[ii] = s / a[ii * p + ii];
  }
  return true;
}

struct StandardizedDesign {
  // Column 0 is the intercept (ones); columns 1..p are z-scored predictors.
  std::vector<std::vector<double>> cols;
  std::vector<double> means;  // per predictor
  std::vector<double> sds;
  std::size_t n = 0;
  std::size_t p_total = 0;  // predictors + intercept
};

StandardizedDesign standardize(const DesignMatrix& design) {
  StandardizedDesign out;
  out.n = design.n_rows;
  out.p_total = design.cols.size() + 1;
  out.cols.reserve(out.p_total);
  out.cols.emplace_back(out.n, 1.0);
  for (std::size_t j = 0; j < design.cols.size(); ++j) {
    const auto& col = design.cols[j];
    double m = 0.0;
    for (double v : col) m += v;
    m /= static_cast<double>(out.n);
    double ss = 0.0;
    for (double v : col) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(out.n));
    if (!(sd > 1e-12 * std::max(1.0, std::fabs(m))) || !std::isfinite(sd))
      raise(Errc::singular_design,
            "predictor '" + design.names[j] + "' has zero variance");
    out.means.push_back(m);
    out.sds.push_back(sd);
    std::vector<double> z(out.n);
    for (std::size_t i = 0; i < out.n; ++i) z[i] = (col[i] - m) / sd;
    out.cols.push_back(std::move(z));
  }
  return out;
}

struct IrlsState {
  std::vector<double> eta;  // full linear predictor (incl. offset)
  std::vector<double> mu;
  std::vector<double> w;   // IRLS weights
  std::vector<double> wz;  // w * working response
};

void compute_eta(const StandardizedDesign& sd, std::span<const double> beta,
                 std::span<const double> offset, std::vector<double>& eta) {
  const std::size_t n = sd.n;
  eta.assign(n, beta[0]);
  if (!offset.empty())
    for (std::size_t i = 0; i < n; ++i) eta[i] += offset[i];
  for (std::size_t j = 1; j < sd.p_total; ++j)
    kernels::axpy(beta[j], sd.cols[j].data(), eta.data(), n);
}

void compute_mu(GlmFamily family, const std::vector<double>& eta,
                std::vector<double>& mu, std::vector<double>& scratch) {
  const std::size_t n = eta.size();
  mu.resize(n);
  switch (family) {
    case GlmFamily::logistic: {
      scratch.resize(n);
      for (std::size_t i = 0; i < n; ++i) scratch[i] = -eta[i];
      kernels::exp_vec(scratch.data(), mu.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + mu[i]);
        mu[i] = std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
      }
      break;
    }
    case GlmFamily::poisson_offset:
      kernels::exp_vec(eta.data(), mu.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        mu[i] = std::max(mu[i], std::numeric_limits<double>::min());
      break;
    case GlmFamily::normal_linear:
      mu = eta;
      break;
  }
}

double deviance_of(GlmFamily family, std::span<const double> y,
                   const std::vector<double>& mu) {
  const std::size_t n = y.size();
  double dev = 0.0;
  switch (family) {
    case GlmFamily::logistic:
      for (std::size_t i = 0; i < n; ++i)
        dev -= 2.0 * (y[i] * std::log(mu[i]) +
                      (1.0 - y[i]) * std::log(1.0 - mu[i]));
      break;
    case GlmFamily::poisson_offset:
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > 0.0) dev += 2.0 * (y[i] * std::log(y[i] / mu[i]) - (y[i] - mu[i]));
        else dev += 2.0 * mu[i];
      }
      break;
    case GlmFamily::normal_linear:
      for (std::size_t i = 0; i < n; ++i) dev += (y[i] - mu[i]) * (y[i] - mu[i]);
      break;
  }
  return dev;
}

// max_j |X' (y - mu)|_j on the standardized design.
double max_abs_score(const StandardizedDesign& sd, std::span<const double> y,
                     const std::vector<double>& mu,
                     std::vector<double>& resid) {
  const std::size_t n = sd.n;
  resid.resize(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - mu[i];
  double worst = 0.0;
  for (std::size_t j = 0; j < sd.p_total; ++j)
    worst = std::max(worst,
                     std::fabs(kernels::dot(sd.cols[j].data(), resid.data(), n)));
  return worst;
}

}  // namespace

const char* glm_family_name(GlmFamily f) {
  switch (f) {
    case GlmFamily::logistic: return "logistic";
    case GlmFamily::normal_linear: return "normal";
    case GlmFamily::poisson_offset: return "poisson_offset";
  }
  return "?";
}

void DesignMatrix::add_column(std::string name, std::vector<double> values) {
  if (!cols.empty() && values.size() != n_rows)
    raise(Errc::length_mismatch, "design column '" + name + "' has " +
                                     std::to_string(values.size()) +
                                     " rows, expected " + std::to_string(n_rows));
  n_rows = values.size();
  names.push_back(std::move(name));
  cols.push_back(std::move(values));
}

GlmFit fit_glm(const GlmSpec& spec, const DesignMatrix& design,
               std::span<const double> y, std::span<const double> offset) {
  const std::size_t n = design.n_rows ? design.n_rows : y.size();
  if (y.size() != n)
    raise(Errc::length_mismatch,
          "response has " + std::to_string(y.size()) + " rows, design has " +
              std::to_string(n));
  if (spec.family == GlmFamily::poisson_offset) {
    if (offset.size() != n)
      raise(Errc::length_mismatch,
            "poisson_offset family requires an offset of length " +
                std::to_string(n));
  } else if (!offset.empty()) {
    raise(Errc::length_mismatch, "offset only applies to poisson_offset");
  }
  for (const auto& col : design.cols)
    if (col.size() != n)
      raise(Errc::length_mismatch, "ragged design matrix");

  const StandardizedDesign sd = standardize(design);
  const std::size_t p = sd.p_total;
  if (n < p + (spec.family == GlmFamily::normal_linear ? 1u : 0u))
    raise(Errc::singular_design,
          "not enough rows (" + std::to_string(n) + ") for " +
              std::to_string(p) + " coefficients");

  GlmFit fit;
  fit.family = spec.family;
  fit.predictor_names = design.names;
  fit.column_means = sd.means;
  fit.column_sds = sd.sds;

  std::vector<double> beta(p, 0.0);
  if (spec.family == GlmFamily::poisson_offset) {
    double sy = 0.0, se = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sy += y[i];
      se += std::exp(offset[i]);
    }
    if (sy <= 0.0) {
      // No events at all: the intercept runs to -inf. Return a flagged,
      // finite fit instead of iterating toward the boundary.
      beta[0] = std::log(0.5 / se);
      IrlsState st;
      compute_eta(sd, beta, offset, st.eta);
      std::vector<double> scratch;
      compute_mu(spec.family, st.eta, st.mu, scratch);
      fit.converged = false;
      fit.deviance = deviance_of(spec.family, y, st.mu);
      std::vector<double> resid;
      fit.max_abs_score = max_abs_score(sd, y, st.mu, resid);
      fit.coefficients.assign(p, 0.0);
      fit.coefficients[0] = beta[0];
      BIP_LOG_WARN("poisson fit with all-zero response flagged nonconverged");
      return fit;
    }
    beta[0] = std::log(sy / se);
  }

  IrlsState st;
  std::vector<double> scratch, resid;
  compute_eta(sd, beta, offset, st.eta);
  compute_mu(spec.family, st.eta, st.mu, scratch);
  double dev = deviance_of(spec.family, y, st.mu);
  fit.deviance_trace.push_back(dev);

  std::vector<double> xtwx(p * p), xtwz(p), beta_new(p);
  bool converged = false;
  int iter = 0;
  for (; iter < spec.max_iterations; ++iter) {
    // Working weights and response on the current iterate.
    st.w.resize(n);
    st.wz.resize(n);
    switch (spec.family) {
      case GlmFamily::logistic:
        for (std::size_t i = 0; i < n; ++i) {
          const double w = std::max(st.mu[i] * (1.0 - st.mu[i]), 1e-10);
          st.w[i] = w;
          st.wz[i] = w * st.eta[i] + (y[i] - st.mu[i]);
        }
        break;
      case GlmFamily::poisson_offset:
        for (std::size_t i = 0; i < n; ++i) {
          const double w = st.mu[i];
          st.w[i] = w;
          st.wz[i] = w * (st.eta[i] - offset[i]) + (y[i] - st.mu[i]);
        }
        break;
      case GlmFamily::normal_linear:
        for (std::size_t i = 0; i < n; ++i) {
          st.w[i] = 1.0;
          st.wz[i] = y[i];
        }
        break;
    }

    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k) {
        const double v =
            kernels::dot3(sd.cols[j].data(), sd.cols[k].data(), st.w.data(), n);
        xtwx[j * p + k] = v;
        xtwx[k * p + j] = v;
      }
      xtwz[j] = kernels::dot(sd.cols[j].data(), st.wz.data(), n);
    }

    std::vector<double> a = xtwx;
    beta_new = xtwz;
    if (!cholesky_solve(a, beta_new, p))
      raise(Errc::singular_design,
            "weighted design is rank-deficient after standardization");

    // Step-halving keeps the deviance non-increasing.
    double dev_new = 0.0;
    int halvings = 0;
    for (;;) {
      compute_eta(sd, beta_new, offset, st.eta);
      compute_mu(spec.family, st.eta, st.mu, scratch);
      dev_new = deviance_of(spec.family, y, st.mu);
      if (std::isfinite(dev_new) &&
          dev_new <= dev * (1.0 + 1e-12) + 1e-12)
        break;
      if (++halvings > spec.max_step_halvings) break;
      for (std::size_t j = 0; j < p; ++j)
        beta_new[j] = 0.5 * (beta_new[j] + beta[j]);
    }

    const double dev_change = std::fabs(dev - dev_new);
    beta = beta_new;
    const double score = max_abs_score(sd, y, st.mu, resid);
    fit.max_abs_score = score;
    const bool score_ok = score < spec.score_tol;
    const bool dev_ok = dev_change <= spec.deviance_tol * (std::fabs(dev) + 1e-10);
    dev = dev_new;
    fit.deviance_trace.push_back(dev);
    if (score_ok || (iter > 0 && dev_ok)) {
      converged = true;
      ++iter;
      break;
    }
  }

  fit.iterations = iter;
  fit.deviance = dev;
  fit.converged = converged;

  if (spec.family == GlmFamily::logistic) {
    // Quasi/perfect separation: the likelihood maximum sits at the
    // boundary, visible as a near-zero deviance or standardized
    // coefficients running away (|beta| = 50 is log-odds 50 per sd).
    double max_beta = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      max_beta = std::max(max_beta, std::fabs(beta[j]));
    if (max_beta > 50.0 || dev < 1e-6) {
      fit.separation = true;
      fit.converged = false;
    }
  }

  if (spec.family == GlmFamily::normal_linear) {
    if (n <= p)
      raise(Errc::singular_design,
            "normal family needs n > p for a residual variance");
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      rss += (y[i] - st.mu[i]) * (y[i] - st.mu[i]);
    fit.residual_variance = rss / static_cast<double>(n - p);
  }

  // Back-transform to the original predictor scale.
  fit.coefficients.assign(p, 0.0);
  fit.coefficients[0] = beta[0];
  for (std::size_t j = 1; j < p; ++j) {
    const double slope = beta[j] / sd.sds[j - 1];
    fit.coefficients[j] = slope;
    fit.coefficients[0] -= slope * sd.means[j - 1];
  }
  return fit;
}

double GlmFit::linear_predictor(std::span<const double> x) const {
  if (x.size() != n_predictors())
    raise(Errc::dimension_mismatch,
          "predictor vector has " + std::to_string(x.size()) +
              " entries, fit expects " + std::to_string(n_predictors()));
  double eta = coefficients[0];
  for (std::size_t j = 0; j < x.size(); ++j) eta += coefficients[j + 1] * x[j];
  return eta;
}

double predict_probability(const GlmFit& fit, std::span<const double> x) {
  if (fit.family != GlmFamily::logistic)
    raise(Errc::dimension_mismatch, "predict_probability requires a logistic fit");
  const double eta = fit.linear_predictor(x);
  const double p = 1.0 / (1.0 + std::exp(-eta));
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

double gps_density(const GlmFit& fit, std::span<const double> x, double g) {
  if (fit.family != GlmFamily::normal_linear)
    raise(Errc::dimension_mismatch, "gps_density requires a normal-family fit");
  const double mean = fit.linear_predictor(x);
  const double var = fit.residual_variance;
  const double d = g - mean;
  const double density = std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
  return std::max(density, 1e-300);
}

double predict_mean(const GlmFit& fit, std::span<const double> x, double offset) {
  const double eta = fit.linear_predictor(x);
  switch (fit.family) {
    case GlmFamily::poisson_offset:
      return std::exp(eta + offset);
    case GlmFamily::normal_linear:
      return eta;
    case GlmFamily::logistic: {
      const double p = 1.0 / (1.0 + std::exp(-eta));
      return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
    }
  }
  return eta;
}

}  // namespace bipartite
