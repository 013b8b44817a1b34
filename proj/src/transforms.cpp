#include "levy/transforms.hpp"

#include <cmath>

#include "levy/error.hpp"
#include "levy/skewed.hpp"

namespace levy {

namespace {

TransformedSample make(const IncrementSample& in, std::size_t n_out, TransformKind kind, const char* tag) {
  TransformedSample t;
  t.kind = kind;
  t.n_effective = n_out;
  t.sample.h = in.h;
  t.sample.model = in.model.empty() ? tag : in.model + "/" + tag;
  t.sample.values.resize(n_out);
  return t;
}

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Symmetrized: return "symmetrized";
    case TransformKind::Centered: return "centered";
    case TransformKind::Deskewed: return "deskewed";
  }
  return "unknown";
}

double center_skew_factor(double beta) {
  const double b = std::exp2(beta);
  return (2.0 - b) / (2.0 + b);
}

double deskew_trend_factor(double beta) { return 2.0 - std::exp2(1.0 / beta); }

TransformedSample symmetrize(const IncrementSample& sample) {
  const std::size_t n = sample.values.size();
  if (n < 2) fail(ErrorCode::DomainError, "symmetrize needs n >= 2", "symmetrize");
  TransformedSample t = make(sample, n / 2, TransformKind::Symmetrized, "symmetrized");
  const double* x = sample.values.data();
  double* out = t.sample.values.data();
  for (std::size_t l = 0; l < t.n_effective; ++l) out[l] = x[2 * l + 1] - x[2 * l];
  return t;
}

TransformedSample center_triple(const IncrementSample& sample) {
  const std::size_t n = sample.values.size();
  if (n < 3) fail(ErrorCode::DomainError, "center_triple needs n >= 3", "center_triple");
  TransformedSample t = make(sample, n / 3, TransformKind::Centered, "centered");
  const double* x = sample.values.data();
  double* out = t.sample.values.data();
  for (std::size_t l = 0; l < t.n_effective; ++l) out[l] = (x[3 * l] + x[3 * l + 2]) - 2.0 * x[3 * l + 1];
  return t;
}

TransformedSample deskew_triple(const IncrementSample& sample, double beta) {
  const std::size_t n = sample.values.size();
  if (n < 3) fail(ErrorCode::DomainError, "deskew_triple needs n >= 3", "deskew_triple");
  if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
    fail(ErrorCode::DomainError, "deskew_triple needs beta in (0,2) with beta != 1", "deskew_triple");
  TransformedSample t = make(sample, n / 3, TransformKind::Deskewed, "deskewed");
  t.beta_used = beta;
  const double w = std::exp2(1.0 / beta);
  const double* x = sample.values.data();
  double* out = t.sample.values.data();
  for (std::size_t l = 0; l < t.n_effective; ++l) out[l] = (x[3 * l] + x[3 * l + 2]) - w * x[3 * l + 1];
  return t;
}

PipelineResult full_pipeline(const IncrementSample& sample, const PipelineOptions& opts) {
  if (sample.values.size() < 9) fail(ErrorCode::DomainError, "pipeline needs n >= 9", "full_pipeline");
  if (opts.step1 != "log" && opts.step1 != "frac")
    fail(ErrorCode::InvalidConfig, "step-1 estimator must be 'log' or 'frac'", "full_pipeline");
  PipelineResult r;
  r.n = sample.values.size();

  try {
    const TransformedSample sym = symmetrize(sample);
    r.step1 = opts.step1 == "log" ? log_moment_estimate(sym.sample) : frac_moment_estimate(sym.sample, opts.p);
  } catch (const Error& e) {
    fail(e.code(), e.what(), "full_pipeline step 1 (symmetrize): " + e.context());
  }
  r.beta_hat = r.step1.beta_hat;
  if (!(r.beta_hat > 0.0 && r.beta_hat < 2.0) || r.beta_hat == 1.0)
    fail(ErrorCode::DomainError, "beta_hat = " + std::to_string(r.beta_hat) + " is outside (0,2) minus {1}",
         "full_pipeline step 1 (symmetrize)");
  r.sigma_hat = r.step1.sigma_hat / std::exp2(1.0 / r.beta_hat);

  try {
    const TransformedSample cen = center_triple(sample);
    r.p_hat_centered = sign_statistic(cen.sample);
    // Keep the sign statistic inside the admissible positivity region at β̂.
    const double lo = std::fmax(0.0, 1.0 - 1.0 / r.beta_hat), hi = std::fmin(1.0, 1.0 / r.beta_hat);
    const double eps = 1e-12;
    const double pc = std::fmin(hi - eps, std::fmax(lo + eps, r.p_hat_centered));
    r.rho_hat_centered = positivity_to_skew(r.beta_hat, pc);
    double rho = r.rho_hat_centered / center_skew_factor(r.beta_hat);
    if (std::fabs(rho) > 1.0) {
      warn("pipeline skewness estimate " + std::to_string(rho) + " clamped to [-1, 1]");
      rho = std::fmax(-1.0, std::fmin(1.0, rho));
      r.rho_clamped = true;
    }
    r.rho_hat = rho;
    r.p_hat = skew_to_positivity(r.beta_hat, rho);
  } catch (const Error& e) {
    fail(e.code(), e.what(), "full_pipeline step 2 (center): " + e.context());
  }

  try {
    const TransformedSample des = deskew_triple(sample, r.beta_hat);
    r.median_deskewed = median_gamma(des.sample);
    r.gamma_hat = r.median_deskewed / deskew_trend_factor(r.beta_hat);
  } catch (const Error& e) {
    fail(e.code(), e.what(), "full_pipeline step 3 (deskew): " + e.context());
  }
  return r;
}

}  // namespace levy
