#include "levy/subordinator.hpp"

#include <cmath>
#include <string>

#include "levy/error.hpp"
#include "levy/special_fn.hpp"

namespace levy {

namespace {

void check_design(double h, std::size_t n, const char* ctx) {
  if (!(h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", ctx);
  if (n < 1) fail(ErrorCode::DomainError, "n must be >= 1", ctx);
}

void require_positive(const IncrementSample& s, const char* ctx) {
  if (s.values.empty()) fail(ErrorCode::EmptySample, "sample is empty", ctx);
  if (!(s.h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", ctx);
  for (double v : s.values)
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::DomainError, "increments must be positive and finite", ctx);
}

}  // namespace

IncrementSample sample_gamma_sub(const GammaSubParams& p, double h, std::size_t n, std::uint64_t seed) {
  check_design(h, n, "sample_gamma_sub");
  if (!(p.delta > 0.0 && p.gamma_rate > 0.0))
    fail(ErrorCode::DomainError, "gamma subordinator needs delta, gamma > 0", "sample_gamma_sub");
  const double shape = p.delta * h;
  if (shape < 1e-12) warn("degenerate gamma shape delta*h = " + std::to_string(shape));
  IncrementSample out;
  out.h = h;
  out.model = "gamma";
  out.values.resize(n);
  Rng rng(seed);
  const double log_rate = std::log(p.gamma_rate);
  for (auto& v : out.values) v = std::exp(rng.log_gamma_variate(shape) - log_rate);
  return out;
}

IncrementSample sample_ig_sub(const IGSubParams& p, double h, std::size_t n, std::uint64_t seed) {
  check_design(h, n, "sample_ig_sub");
  if (!(p.delta > 0.0 && p.gamma_ig > 0.0))
    fail(ErrorCode::DomainError, "IG subordinator needs delta, gamma > 0", "sample_ig_sub");
  const double dh = p.delta * h;
  if (dh < 1e-12) warn("degenerate IG shape delta*h = " + std::to_string(dh));
  const double mu = dh / p.gamma_ig;
  const double lambda = dh * dh;
  IncrementSample out;
  out.h = h;
  out.model = "ig";
  out.values.resize(n);
  Rng rng(seed);
  for (auto& v : out.values) {
    const double z = rng.normal();
    const double y = z * z;
    const double c = mu / (2.0 * lambda);
    // Larger root first; the smaller one is μ²/x2 without cancellation.
    const double x2 = mu + c * mu * y + c * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    const double x1 = mu * mu / x2;
    v = (rng.uniform() <= mu / (mu + x1)) ? x1 : x2;
  }
  return out;
}

double gamma_mle_lhs(double delta, double h, std::size_t n) {
  return static_cast<double>(n) * h * log_minus_digamma(delta * h);
}

double gamma_mle_delta(double K, double h, std::size_t n) {
  if (!(K > 0.0)) fail(ErrorCode::NonpositiveK, "gamma MLE needs K > 0", "gamma_mle");
  check_design(h, n, "gamma_mle");
  const double target = std::log(K / (static_cast<double>(n) * h));
  // Work with u = ln(δh) and ln{ln x − ψ(x)}, which is close to linear in u.
  // ln x − ψ(x) ≈ 1/x for small x, so u = −target is a good start.
  auto f = [&](double u) { return std::log(log_minus_digamma(std::exp(u))) - target; };
  double lo = -target, hi = lo;
  int guard = 0;
  while (f(lo) < 0.0) {
    lo -= std::log(4.0);
    if (++guard > 2000) fail(ErrorCode::NoSignChange, "cannot bracket the gamma MLE root", "gamma_mle");
  }
  while (f(hi) > 0.0) {
    hi += std::log(4.0);
    if (++guard > 2000) fail(ErrorCode::NoSignChange, "cannot bracket the gamma MLE root", "gamma_mle");
  }
  if (lo == hi) return std::exp(lo) / h;
  const double u = find_root_monotone(f, RootBracket{lo, hi, 1e-14, 200});
  return std::exp(u) / h;
}

SubordinatorEstimate gamma_mle(const IncrementSample& sample) {
  require_positive(sample, "gamma_mle");
  const double h = sample.h;
  const std::size_t n = sample.values.size();
  const double T = sample.T();
  double XT = 0.0, sum_log = 0.0;
  for (double v : sample.values) {
    XT += v;
    sum_log += std::log(v / h);
  }
  const double K = T * std::log(XT / T) - h * sum_log;
  if (!(K > 0.0)) fail(ErrorCode::NonpositiveK, "K = " + std::to_string(K) + " is not positive", "gamma_mle");
  SubordinatorEstimate est;
  est.delta_hat = gamma_mle_delta(K, h, n);
  est.gamma_hat = est.delta_hat * T / XT;
  const Mat2 fi = gamma_fisher({est.delta_hat, est.gamma_hat});
  est.cov = {1.0 / (fi[0] * n), 0.0, 0.0, 1.0 / (fi[3] * T)};
  return est;
}

SubordinatorEstimate gamma_moment_estimate(const IncrementSample& sample) {
  const char* ctx = "gamma_moment_estimate";
  if (sample.values.empty()) fail(ErrorCode::EmptySample, "sample is empty", ctx);
  if (!(sample.h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", ctx);
  // Zeros (underflowed draws at tiny δh) add nothing to either moment, so only negatives are rejected.
  for (double v : sample.values)
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::DomainError, "increments must be nonnegative and finite", ctx);
  const double T = sample.T();
  double s1 = 0.0, s2 = 0.0;
  for (double v : sample.values) {
    s1 += v;
    s2 += v * v;
  }
  const double m1 = s1 / T, m2 = s2 / T;
  if (!(m2 > 0.0)) fail(ErrorCode::DomainError, "second moment is zero", "gamma_moment_estimate");
  SubordinatorEstimate est;
  est.gamma_hat = m1 / m2;
  est.delta_hat = m1 * m1 / m2;
  const double d = est.delta_hat, g = est.gamma_hat;
  est.cov = {2.0 * d / T, 2.0 * g / T, 2.0 * g / T, 3.0 * g * g / (d * T)};
  return est;
}

SubordinatorEstimate ig_mle(const IncrementSample& sample) {
  require_positive(sample, "ig_mle");
  const double h = sample.h;
  const std::size_t n = sample.values.size();
  const double T = sample.T();
  bool all_equal = true;
  double XT = 0.0, inv_sum = 0.0;
  for (double v : sample.values) {
    all_equal = all_equal && (v == sample.values[0]);
    XT += v;
    inv_sum += h * h / v;
  }
  const double brace = (inv_sum - T * T / XT) / static_cast<double>(n);
  if (all_equal || !(brace > 0.0))
    fail(ErrorCode::NonpositiveBrace, "IG MLE brace is not positive (constant increments?)", "ig_mle");
  SubordinatorEstimate est;
  est.delta_hat = 1.0 / std::sqrt(brace);
  est.gamma_hat = T * est.delta_hat / XT;
  const Mat2 fi = ig_fisher({est.delta_hat, est.gamma_hat});
  est.cov = {1.0 / (fi[0] * n), 0.0, 0.0, 1.0 / (fi[3] * T)};
  return est;
}

Mat2 gamma_fisher(const GammaSubParams& p) {
  return {1.0 / (p.delta * p.delta), 0.0, 0.0, p.delta / (p.gamma_rate * p.gamma_rate)};
}

Mat2 ig_fisher(const IGSubParams& p) { return {2.0 / (p.delta * p.delta), 0.0, 0.0, p.delta / p.gamma_ig}; }

}  // namespace levy
