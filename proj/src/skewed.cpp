#include "levy/skewed.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levy/error.hpp"
#include "levy/kernels.hpp"
#include "levy/special_fn.hpp"

namespace levy {

namespace {

double xi_of(double beta, double p_pos, const char* ctx) {
  if (!(beta > 0.0 && beta < 2.0)) fail(ErrorCode::DomainError, "beta must lie in (0, 2)", ctx);
  const double xi = beta * kPi * (p_pos - 0.5);
  const double c = std::cos(xi);
  if (!(c > 0.0))
    fail(ErrorCode::DomainError, "cos(xi) <= 0 at p = " + std::to_string(p_pos) + ", beta = " + std::to_string(beta),
         ctx);
  return xi;
}

std::vector<double> abs_pow_vec(const std::vector<double>& x, double p) {
  std::vector<double> out(x.size());
  if (p == 0.0) {
    out.assign(x.size(), 1.0);
  } else {
    kernels::abs_pow(x.data(), x.size(), p, out.data());
  }
  return out;
}

// Σ_{j} Π_l |x_{j+l}|^{r_l} over j = 0..n−m.
double product_sum(const std::vector<double>& x, const MultiIndex& r) {
  const std::size_t m = r.size();
  const std::size_t n = x.size();
  if (n < m) fail(ErrorCode::EmptySample, "sample shorter than the multi-index", "mpv");
  bool equal = true;
  for (double v : r) equal = equal && (v == r[0]);
  if (m == 1 || equal) {
    const std::vector<double> a = abs_pow_vec(x, r[0]);
    if (m == 1) return kernels::sum(a.data(), n);
    if (m == 2) return kernels::lag_product_sum(a.data(), n);
    if (m == 3) return kernels::triple_product_sum(a.data(), n);
  }
  std::vector<std::vector<double>> pw;
  pw.reserve(m);
  for (double v : r) pw.push_back(abs_pow_vec(x, v));
  double s = 0.0;
  for (std::size_t j = 0; j + m <= n; ++j) {
    double t = 1.0;
    for (std::size_t l = 0; l < m; ++l) t *= pw[l][j + l];
    s += t;
  }
  return s;
}

void check_q(double q, const char* ctx) {
  if (!(q > 0.0 && q < 0.5)) fail(ErrorCode::DomainError, "q must lie in (0, 1/2)", ctx);
}

Mat3 nan_matrix() {
  Mat3 m;
  m.fill(std::numeric_limits<double>::quiet_NaN());
  return m;
}

}  // namespace

double sign_statistic(const IncrementSample& sample) {
  if (sample.values.empty()) fail(ErrorCode::EmptySample, "sample is empty", "sign_statistic");
  const std::size_t n = sample.values.size();
  std::size_t zeros = 0;
  for (double v : sample.values) zeros += (v == 0.0);
  if (zeros > 0) warn(std::to_string(zeros) + " zero increment(s) counted as sign 0");
  return 0.5 * (kernels::sum_sign(sample.values.data(), n) / static_cast<double>(n) + 1.0);
}

double mu_abs(double beta, double p_pos, double r) {
  const double xi = xi_of(beta, p_pos, "mu_abs");
  if (!(r > -1.0 && r < beta)) fail(ErrorCode::DomainError, "mu_abs needs r in (-1, beta)", "mu_abs");
  if (r == 0.0) return 1.0;
  const double tail = std::cos(r * xi / beta) / std::pow(std::cos(xi), r / beta);
  if (r > 0.0) {
    // 1/(Γ(1−r)cos(rπ/2)) = 2Γ(r)sin(rπ/2)/π, finite through r = 1.
    return gamma_fn(1.0 - r / beta) * 2.0 * gamma_fn(r) * std::sin(0.5 * r * kPi) / kPi * tail;
  }
  return gamma_fn(1.0 - r / beta) / (gamma_fn(1.0 - r) * std::cos(0.5 * r * kPi)) * tail;
}

double nu_signed(double beta, double p_pos, double r) {
  const double xi = xi_of(beta, p_pos, "nu_signed");
  const bool ok = (r > -2.0 && r < -1.0) || (r > -1.0 && r < beta);
  if (!ok) fail(ErrorCode::DomainError, "nu_signed needs r in (-2,-1) or (-1, beta)", "nu_signed");
  if (r == 0.0) return 2.0 * p_pos - 1.0;
  const double tail = std::sin(r * xi / beta) / std::pow(std::cos(xi), r / beta);
  if (r > 0.0) {
    // 1/(Γ(1−r)sin(rπ/2)) = 2Γ(r)cos(rπ/2)/π.
    return gamma_fn(1.0 - r / beta) * 2.0 * gamma_fn(r) * std::cos(0.5 * r * kPi) / kPi * tail;
  }
  return gamma_fn(1.0 - r / beta) / (gamma_fn(1.0 - r) * std::sin(0.5 * r * kPi)) * tail;
}

double mu_multi(double beta, double p_pos, const MultiIndex& r) {
  double m = 1.0;
  for (double v : r) m *= mu_abs(beta, p_pos, v);
  return m;
}

double mpv(const IncrementSample& sample, double beta, const MultiIndex& r) {
  if (r.empty()) fail(ErrorCode::DomainError, "multi-index must be nonempty", "mpv");
  if (!(beta > 0.0 && beta <= 2.0)) fail(ErrorCode::DomainError, "beta must lie in (0, 2]", "mpv");
  double rplus = 0.0;
  for (double v : r) {
    if (!(v >= 0.0)) fail(ErrorCode::DomainError, "multi-index entries must be nonnegative", "mpv");
    rplus += v;
  }
  const double n = static_cast<double>(sample.values.size());
  return std::pow(n, rplus / beta - 1.0) * product_sum(sample.values, r);
}

double bipower_rhs(double beta, double p_hat, double q) {
  check_q(q, "bipower_rhs");
  const double c1 = gamma_fn(1.0 - 2.0 * q) * std::cos(q * kPi) /
                    std::pow(gamma_fn(1.0 - q) * std::cos(0.5 * q * kPi), 2.0);
  const double d = p_hat - 0.5;
  const double den = std::cos(2.0 * q * kPi * d);
  if (!(den > 0.0)) fail(ErrorCode::DomainError, "C2 denominator is not positive", "bipower_rhs");
  const double c2 = std::pow(std::cos(q * kPi * d), 2.0) / den;
  const double g = std::pow(gamma_fn(1.0 - q / beta), 2.0) / gamma_fn(1.0 - 2.0 * q / beta);
  return c1 * c2 * g;
}

double bipower_beta(const IncrementSample& sample, double p_hat, double q) {
  check_q(q, "bipower_beta");
  const std::size_t n = sample.values.size();
  if (n < 2) fail(ErrorCode::EmptySample, "bipower needs n >= 2", "bipower_beta");
  const std::vector<double> a = abs_pow_vec(sample.values, q);
  const double num = kernels::lag_product_sum(a.data(), n);
  const double den = kernels::sum_abs_pow(sample.values.data(), n, 2.0 * q);
  if (!(den > 0.0)) fail(ErrorCode::DomainError, "denominator sum is zero", "bipower_beta");
  const double lhs = num / den;
  auto f = [&](double b) { return bipower_rhs(b, p_hat, q) - lhs; };
  const RootBracket br{std::fmax(4.0 * q, 1.0) + 1e-9, 2.0 - 1e-9, 1e-13, 200};
  try {
    return find_root_monotone(f, br);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSignChange) throw;
    fail(ErrorCode::RootOutOfBracket,
         "bipower ratio " + std::to_string(lhs) + " is outside the range of the moment map", "bipower_beta");
  }
}

double sigma_star_power(const IncrementSample& sample, double p_hat, double beta_hat, double q, bool four_q) {
  check_q(q, "sigma_star_power");
  const std::size_t n = sample.values.size();
  const double nn = static_cast<double>(n);
  const double mu2q = mu_abs(beta_hat, p_hat, 2.0 * q);
  if (!four_q) {
    const double s = kernels::sum_abs_pow(sample.values.data(), n, 2.0 * q);
    return std::pow(nn, 2.0 * q / beta_hat - 1.0) * s / mu2q;
  }
  if (!(4.0 * q < beta_hat)) fail(ErrorCode::DomainError, "sigma*_{4q} needs 4q < beta", "sigma_star_power");
  const std::vector<double> a = abs_pow_vec(sample.values, 2.0 * q);
  const double s = kernels::lag_product_sum(a.data(), n);
  return std::pow(nn, 4.0 * q / beta_hat - 1.0) * s / (mu2q * mu2q);
}

double tripower_integrated_scale(const IncrementSample& sample, double p_hat, double beta_hat) {
  if (!(beta_hat > 1.0 && beta_hat < 2.0))
    fail(ErrorCode::DomainError, "tripower scale needs beta_hat in (1, 2)", "tripower_integrated_scale");
  const std::size_t n = sample.values.size();
  if (n < 3) fail(ErrorCode::EmptySample, "tripower needs n >= 3", "tripower_integrated_scale");
  const double r = beta_hat / 3.0;
  const std::vector<double> a = abs_pow_vec(sample.values, r);
  const double m_star = kernels::triple_product_sum(a.data(), n);
  const double mu = mu_abs(beta_hat, p_hat, r);
  return m_star / (mu * mu * mu);
}

namespace {

double a_coef(double beta, double p_pos, const MultiIndex& r) {
  double s = 0.0;
  for (std::size_t qi = 0; qi < r.size(); ++qi) {
    double prod = 1.0;
    for (std::size_t l = 0; l < r.size(); ++l)
      if (l != qi) prod *= mu_abs(beta, p_pos, r[l]);
    s += prod * (nu_signed(beta, p_pos, r[qi]) - (2.0 * p_pos - 1.0) * mu_abs(beta, p_pos, r[qi]));
  }
  return s;
}

double b_coef(double beta, double p_pos, const MultiIndex& r, const MultiIndex& rp) {
  const std::size_t m = r.size();
  auto mu = [&](double v) { return mu_abs(beta, p_pos, v); };
  double same = 1.0, indep = 1.0;
  for (std::size_t l = 0; l < m; ++l) {
    same *= mu(r[l] + rp[l]);
    indep *= mu(r[l]) * mu(rp[l]);
  }
  double b = same - (2.0 * static_cast<double>(m) - 1.0) * indep;
  // 1-based indices as in the displayed sum; the two terms swap r and r′.
  for (std::size_t q = 1; q + 1 <= m; ++q) {
    double t1 = 1.0, t2 = 1.0;
    for (std::size_t l = 1; l <= m - q; ++l) {
      t1 *= mu(rp[l - 1]);
      t2 *= mu(r[l - 1]);
    }
    for (std::size_t l = m - q + 1; l <= m; ++l) {
      t1 *= mu(rp[l - 1] + r[l - m + q - 1]);
      t2 *= mu(r[l - 1] + rp[l - m + q - 1]);
    }
    for (std::size_t l = q + 1; l <= m; ++l) {
      t1 *= mu(r[l - 1]);
      t2 *= mu(rp[l - 1]);
    }
    b += t1 + t2;
  }
  return b;
}

void check_indices(const MultiIndex& r, const MultiIndex& rp, const char* ctx) {
  if (r.empty() || r.size() != rp.size()) fail(ErrorCode::DomainError, "multi-indices must share a nonempty length", ctx);
  double a = 0.0, b = 0.0;
  for (double v : r) a += v;
  for (double v : rp) b += v;
  if (!(a > 0.0) || std::fabs(a - b) > 1e-12) fail(ErrorCode::DomainError, "need r+ = r'+ > 0", ctx);
}

}  // namespace

Mat3 mpv_cov(double beta, double p_pos, const MultiIndex& r, const MultiIndex& rp, double sp, double s2p) {
  check_indices(r, rp, "mpv_cov");
  const double s11 = 4.0 * p_pos * (1.0 - p_pos);
  const double s12 = a_coef(beta, p_pos, r) * sp;
  const double s13 = a_coef(beta, p_pos, rp) * sp;
  const double s22 = b_coef(beta, p_pos, r, r) * s2p;
  const double s23 = b_coef(beta, p_pos, r, rp) * s2p;
  const double s33 = b_coef(beta, p_pos, rp, rp) * s2p;
  return {s11, s12, s13, s12, s22, s23, s13, s23, s33};
}

Mat3 delta_cov(double beta, double p_pos, const MultiIndex& r, const MultiIndex& rp, double sp, double s2p) {
  const Mat3 sigma = mpv_cov(beta, p_pos, r, rp, sp, s2p);
  auto fd = [&](const MultiIndex& idx, double& dp, double& db) {
    const double hp = 1e-6 * std::fmax(std::fabs(p_pos), 1e-3);
    const double hb = 1e-6 * beta;
    dp = (mu_multi(beta, p_pos + hp, idx) - mu_multi(beta, p_pos - hp, idx)) / (2.0 * hp);
    db = (mu_multi(beta + hb, p_pos, idx) - mu_multi(beta - hb, p_pos, idx)) / (2.0 * hb);
  };
  double dp1, db1, dp2, db2;
  fd(r, dp1, db1);
  fd(rp, dp2, db2);
  const Mat3 grad{2.0, 0.0, 0.0, sp * dp1, sp * db1, mu_multi(beta, p_pos, r),
                  sp * dp2, sp * db2, mu_multi(beta, p_pos, rp)};
  const Mat3 inv = inverse(grad);
  return mat_mul(mat_mul(inv, sigma), transpose(inv));
}

namespace {

SkewedEstimate first_stage(const IncrementSample& sample, double q, const char* method) {
  check_q(q, method);
  if (sample.values.size() < 3) fail(ErrorCode::EmptySample, "need at least 3 increments", method);
  SkewedEstimate est;
  est.method = method;
  est.q = q;
  est.n = sample.values.size();
  est.h = sample.h;
  est.p_hat = sign_statistic(sample);
  est.beta_hat = bipower_beta(sample, est.p_hat, q);
  xi_of(est.beta_hat, est.p_hat, method);
  est.sigma_star_2q = sigma_star_power(sample, est.p_hat, est.beta_hat, q, false);
  est.sigma_star_4q = sigma_star_power(sample, est.p_hat, est.beta_hat, q, true);
  try {
    est.cov = delta_cov(est.beta_hat, est.p_hat, {2.0 * q, 0.0}, {q, q}, est.sigma_star_2q, est.sigma_star_4q);
  } catch (const Error&) {
    est.cov = nan_matrix();
  }
  return est;
}

}  // namespace

SkewedEstimate sign_bipower_estimate(const IncrementSample& sample, double q) {
  SkewedEstimate est = first_stage(sample, q, "sign_bipower");
  est.scale_target = "sigma";
  est.scale_hat = std::pow(est.sigma_star_2q, 1.0 / (2.0 * q));
  return est;
}

SkewedEstimate tripower_estimate(const IncrementSample& sample, double q) {
  SkewedEstimate est = first_stage(sample, q, "tripower");
  est.scale_target = "integrated";
  est.scale_hat = tripower_integrated_scale(sample, est.p_hat, est.beta_hat);
  return est;
}

}  // namespace levy
