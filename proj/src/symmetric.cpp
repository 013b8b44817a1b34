#include "levy/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levy/error.hpp"
#include "levy/kernels.hpp"
#include "levy/special_fn.hpp"
#include "levy/stable_density.hpp"

namespace levy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Mat3 nan_matrix() {
  Mat3 m;
  m.fill(kNaN);
  return m;
}

struct LogStats {
  double mean;
  double s2;  // Σ (L_j − L̄)²
  std::size_t k;
};

LogStats log_residual_stats(const MedianResiduals& res) {
  const std::size_t m = res.off_median.size();
  std::vector<double> logs(m);
  kernels::log_abs(res.off_median.data(), m, logs.data());
  const double mean = kernels::sum(logs.data(), m) / static_cast<double>(m);
  const double s2 = kernels::sum_sq_dev(logs.data(), m, mean);
  return {mean, s2, res.k};
}

void require_log_sample(const MedianResiduals& res, const char* ctx) {
  if (res.n_used < 5) fail(ErrorCode::EmptySample, "log-moment estimation needs n >= 5", ctx);
  for (double r : res.off_median)
    if (r == 0.0) fail(ErrorCode::ZeroResidual, "a residual about the median is exactly zero", ctx);
}

}  // namespace

MedianResiduals median_residuals(const IncrementSample& sample) {
  if (sample.values.empty()) fail(ErrorCode::EmptySample, "sample is empty", "median_gamma");
  MedianResiduals out;
  std::size_t n = sample.values.size();
  if (n % 2 == 0) --n;
  if (n == 0) fail(ErrorCode::EmptySample, "sample is empty after dropping the last increment", "median_gamma");
  out.n_used = n;
  out.k = (n - 1) / 2;
  std::vector<double> tmp(sample.values.begin(), sample.values.begin() + static_cast<std::ptrdiff_t>(n));
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(out.k), tmp.end());
  out.median = tmp[out.k];
  out.all.resize(n);
  out.off_median.reserve(n - 1);
  bool skipped = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = sample.values[j] - out.median;
    out.all[j] = r;
    if (!skipped && sample.values[j] == out.median) {
      skipped = true;
      continue;
    }
    out.off_median.push_back(r);
  }
  return out;
}

double median_gamma(const IncrementSample& sample) {
  if (!(sample.h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", "median_gamma");
  return median_residuals(sample).median / sample.h;
}

LogMomentStats log_moment_nu(double beta, double sigma) {
  if (!(beta > 0.0 && beta < 2.0) || !(sigma > 0.0))
    fail(ErrorCode::DomainError, "need beta in (0,2) and sigma > 0", "log_moment_nu");
  const double b2 = beta * beta;
  const double pi2 = kPi * kPi;
  return {
      kEulerGamma * (1.0 / beta - 1.0) + std::log(sigma),
      (pi2 / 6.0) * (1.0 / b2 + 0.5),
      2.0 * kZeta3 * (1.0 / (b2 * beta) - 1.0),
      pi2 * pi2 * (3.0 / (20.0 * b2 * b2) + 1.0 / (12.0 * b2) + 19.0 / 240.0),
  };
}

Mat3 v_log(double beta, double sigma) {
  const LogMomentStats nu = log_moment_nu(beta, sigma);
  const double c = kEulerGamma;
  const double pi2 = kPi * kPi, pi4 = pi2 * pi2;
  const double b2 = beta * beta, b3 = b2 * beta, b4 = b2 * b2;
  const double gap = nu.nu4 - nu.nu2 * nu.nu2;
  const double v11 = 1.1 * b2 + 0.5 * b4 + 0.65 * b4 * b2;
  const double v12 = (sigma / pi4) * (9.0 * c * b4 * gap - 3.0 * pi2 * b3 * nu.nu3);
  const double v22 = (sigma * sigma / pi4) * (9.0 * c * c * b2 * gap + pi4 * nu.nu2 - 6.0 * c * pi2 * beta * nu.nu3);
  const double sd = median_asymptotic_sd(beta, sigma);
  Mat3 v{v11, v12, 0.0, v12, v22, 0.0, 0.0, 0.0, sd * sd};
  if (!is_positive_definite(v))
    fail(ErrorCode::NotPositiveDefinite, "V^log is not positive definite", "v_log");
  return v;
}

SymmetricEstimate log_moment_estimate(const IncrementSample& sample) {
  if (!(sample.h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", "log_moment_estimate");
  const MedianResiduals res = median_residuals(sample);
  require_log_sample(res, "log_moment_estimate");
  const LogStats ls = log_residual_stats(res);
  const double two_k = 2.0 * static_cast<double>(ls.k);
  const double brace = 6.0 * ls.s2 / (two_k * kPi * kPi) - 0.5;
  if (!(brace > 0.0))
    fail(ErrorCode::NonpositiveVarianceGap,
         "log-residual variance does not exceed its Gaussian floor (brace = " + std::to_string(brace) + ")",
         "log_moment_estimate");
  SymmetricEstimate est;
  est.method = "log_moment";
  est.beta_hat = 1.0 / std::sqrt(brace);
  const double ib = 1.0 / est.beta_hat;
  est.sigma_hat = std::exp(ib * std::log(1.0 / sample.h) + ls.mean - kEulerGamma * (ib - 1.0));
  est.gamma_hat = res.median / sample.h;
  est.n_used = res.n_used;
  est.h = sample.h;
  est.cov = (est.beta_hat < 2.0) ? v_log(est.beta_hat, est.sigma_hat) : nan_matrix();
  return est;
}

double psi_transform(double x) {
  if (!(x > 0.0)) fail(ErrorCode::DomainError, "psi_transform requires x > 0", "psi_transform");
  const double x2 = x * x;
  return std::sqrt(5.0 / 22.0) *
         (2.0 * std::log(x) - std::log(22.0 + 5.0 * x2 + std::sqrt(22.0 * (22.0 + 10.0 * x2 + 13.0 * x2 * x2))));
}

double beta_inv_sq_unbiased(const IncrementSample& sample) {
  const MedianResiduals res = median_residuals(sample);
  require_log_sample(res, "beta_inv_sq_unbiased");
  const LogStats ls = log_residual_stats(res);
  return 6.0 * ls.s2 / ((2.0 * static_cast<double>(ls.k) - 1.0) * kPi * kPi) - 0.5;
}

double known_scale_beta(const IncrementSample& sample, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::DomainError, "sigma must be > 0", "known_scale_beta");
  if (!(sample.h > 0.0 && sample.h < 1.0)) fail(ErrorCode::DomainError, "known-scale estimator needs h in (0,1)", "known_scale_beta");
  const MedianResiduals res = median_residuals(sample);
  require_log_sample(res, "known_scale_beta");
  const LogStats ls = log_residual_stats(res);
  const double den = std::log(sigma) - kEulerGamma - ls.mean;
  if (!(std::fabs(den) > 1e-12))
    fail(ErrorCode::DenominatorNearZero, "known-scale denominator is numerically zero", "known_scale_beta");
  return (std::log(1.0 / sample.h) - kEulerGamma) / den;
}

double c_moment(double beta, double q) {
  if (!(beta > 0.0 && beta <= 2.0)) fail(ErrorCode::DomainError, "beta must lie in (0, 2]", "c_moment");
  if (!(q > -1.0 && q < beta))
    fail(ErrorCode::DomainError, "moment order q must lie in (-1, beta)", "c_moment");
  return std::exp(q * std::log(2.0) + log_gamma(0.5 * (q + 1.0)) + log_gamma(1.0 - q / beta) -
                  0.5 * std::log(kPi) - log_gamma(1.0 - 0.5 * q));
}

SymmetricEstimate frac_moment_estimate(const IncrementSample& sample, double p) {
  if (!(p > 0.0 && p < 1.0 / 3.0)) fail(ErrorCode::DomainError, "p must lie in (0, 1/3)", "frac_moment_estimate");
  if (!(sample.h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", "frac_moment_estimate");
  const MedianResiduals res = median_residuals(sample);
  if (res.n_used < 3) fail(ErrorCode::EmptySample, "fractional-moment estimation needs n >= 3", "frac_moment_estimate");
  const std::size_t n = res.all.size();
  const double nn = static_cast<double>(n);
  const double H1 = kernels::sum_abs_pow(res.all.data(), n, p) / nn;
  const double H2 = kernels::sum_abs_pow(res.all.data(), n, 2.0 * p) / nn;
  if (!(H2 > 0.0)) fail(ErrorCode::ZeroResidual, "all residuals are zero", "frac_moment_estimate");
  const double ratio = H1 * H1 / H2;
  auto objective = [&](double b) {
    const double c1 = c_moment(b, p);
    return c1 * c1 / c_moment(b, 2.0 * p) - ratio;
  };
  RootBracket br{6.0 * p + 1e-9, 2.0 - 1e-9, 1e-13, 200};
  double beta_hat;
  try {
    beta_hat = find_root_monotone(objective, br);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSignChange) throw;
    fail(ErrorCode::RootOutOfBracket,
         "empirical moment ratio " + std::to_string(ratio) + " is outside the range of the moment map on (6p, 2)",
         "frac_moment_estimate");
  }
  SymmetricEstimate est;
  est.method = "frac_moment";
  est.p = p;
  est.beta_hat = beta_hat;
  est.sigma_hat = std::pow(std::pow(sample.h, -p / beta_hat) * H1 / c_moment(beta_hat, p), 1.0 / p);
  est.gamma_hat = res.median / sample.h;
  est.n_used = res.n_used;
  est.h = sample.h;
  est.cov = (p < beta_hat / 6.0) ? v_p(beta_hat, est.sigma_hat, p) : nan_matrix();
  return est;
}

Mat3 v_p(double beta, double sigma, double p) {
  if (!(beta > 0.0 && beta < 2.0) || !(sigma > 0.0))
    fail(ErrorCode::DomainError, "need beta in (0,2) and sigma > 0", "v_p");
  if (!(p > 0.0 && p < beta / 6.0)) fail(ErrorCode::DomainError, "p must lie in (0, beta/6)", "v_p");
  const double c1 = c_moment(beta, p), c2 = c_moment(beta, 2.0 * p);
  const double c3 = c_moment(beta, 3.0 * p), c4 = c_moment(beta, 4.0 * p);
  const double psi1 = digamma(1.0 - p / beta), psi2 = digamma(1.0 - 2.0 * p / beta);
  const double eta = psi1 - psi2;
  const double pre = 1.0 / (p * p * eta * eta);
  const double r21 = c2 / (c1 * c1);
  const double r312 = c3 / (c1 * c2);
  const double r42 = c4 / (c2 * c2);
  const double b2 = beta * beta;
  const double v11 = b2 * b2 * pre * (r21 - r312 + 0.25 * (r42 - 1.0));
  const double v12 = b2 * sigma * pre * (psi2 * (0.5 * r312 - r21 + 0.5) + psi1 * (0.5 * r312 - 0.25 * r42 - 0.25));
  const double v22 = sigma * sigma * pre *
                     (psi2 * psi2 * (r21 - 1.0) - psi1 * psi2 * (r312 - 1.0) + 0.25 * psi1 * psi1 * (r42 - 1.0));
  const double sd = median_asymptotic_sd(beta, sigma);
  Mat3 v{v11, v12, 0.0, v12, v22, 0.0, 0.0, 0.0, sd * sd};
  if (!is_positive_definite(v)) fail(ErrorCode::NotPositiveDefinite, "V^p is not positive definite", "v_p");
  return v;
}

std::pair<double, double> gamma_confidence_interval(const SymmetricEstimate& est, double level) {
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::DomainError, "level must lie in (0,1)", "gamma_confidence_interval");
  if (!(est.beta_hat > 0.0 && est.beta_hat < 2.0))
    fail(ErrorCode::DomainError, "confidence interval needs beta_hat in (0,2)", "gamma_confidence_interval");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double rate = std::sqrt(static_cast<double>(est.n_used)) * std::pow(est.h, 1.0 - 1.0 / est.beta_hat);
  const double half = z * median_asymptotic_sd(est.beta_hat, est.sigma_hat) / rate;
  return {est.gamma_hat - half, est.gamma_hat + half};
}

}  // namespace levy
