#include "levy/stable_density.hpp"

#include <cmath>
#include <string>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"
#include "levy/special_fn.hpp"

namespace levy {

namespace {

constexpr int kMaxTerms = 400;
constexpr double kPhiFloor = 1e-300;

void check_beta(double beta, const char* ctx) {
  if (!(beta >= 0.5 && beta < 2.0)) fail(ErrorCode::DomainError, "density needs beta in [0.5, 2)", ctx);
}

// Smallest U with U^3·exp(−U^β) ≤ 1e-17; the same cutoff serves all orders.
double fourier_cutoff(double beta) {
  const double target = 17.0 * std::log(10.0);
  double t = target;
  for (int i = 0; i < 50; ++i) t = target + (3.0 / beta) * std::log(t);
  return std::pow(t, 1.0 / beta);
}

// Scale-free magnitude of series term k before the sine factor.
double series_log_envelope(double beta, double ly, int k) {
  const double kb = k * beta;
  return log_gamma(kb + 1.0) - log_gamma(k + 1.0) - (kb + 1.0) * ly;
}

}  // namespace

StableDensity::StableDensity(double beta) : beta_(beta) {
  check_beta(beta, "StableDensity");
  static constexpr double candidates[] = {1.5, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 150, 200};
  y_switch_ = candidates[sizeof(candidates) / sizeof(candidates[0]) - 1];
  for (double c : candidates) {
    if (series_ok(c) && series_ok(2.0 * c)) {
      y_switch_ = c;
      break;
    }
  }
}

bool StableDensity::series_ok(double y) const {
  const double ly = std::log(y);
  const double s0 = std::fabs(series(y, 0));
  if (!(s0 > 0.0)) return false;
  double min_env = INFINITY, max_env = 0.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double kb = k * beta_;
    const double env = std::exp(series_log_envelope(beta_, ly, k)) * (kb + 1.0) * (kb + 2.0) / (y * y);
    if (env < min_env) min_env = env;
    else if (env > 4.0 * min_env) break;
    if (env > max_env) max_env = env;
    if (min_env < 1e-30 * s0) break;
  }
  const double ref2 = s0 * (beta_ + 1.0) * (beta_ + 2.0) / (y * y);
  return min_env <= 1e-15 * ref2 && max_env <= 1e3 * ref2;
}

double StableDensity::series(double y, int order) const {
  const double ay = std::fabs(y);
  const double ly = std::log(ay);
  double sum = 0.0, min_env = INFINITY;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double kb = k * beta_;
    double env = std::exp(series_log_envelope(beta_, ly, k));
    if (order >= 1) env *= (kb + 1.0) / ay;
    if (order >= 2) env *= (kb + 2.0) / ay;
    if (env > min_env) break;  // asymptotic regime: stop at the smallest term
    min_env = env;
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
    double term = sgn * env * std::sin(0.5 * k * kPi * beta_);
    if (order == 1) term = -term;
    sum += term;
    if (env < 1e-18 * std::fabs(sum)) break;
  }
  sum /= kPi;
  if (order == 1 && y < 0.0) sum = -sum;
  return sum;
}

double StableDensity::fourier(double y, int order) const {
  if (order < 0 || order > 2) fail(ErrorCode::DomainError, "derivative order must be 0, 1 or 2", "phi_deriv");
  const double beta = beta_;
  const double ay = std::fabs(y);
  const double U = fourier_cutoff(beta);
  const double width = ay > 0.0 ? std::fmin(kPi / ay, U / 16.0) : U / 16.0;
  const int panels = static_cast<int>(std::ceil(U / width));
  auto f = [&](double u) {
    const double damp = std::exp(-std::pow(u, beta));
    switch (order) {
      case 0: return std::cos(u * ay) * damp;
      case 1: return u * std::sin(u * ay) * damp;
      default: return u * u * std::cos(u * ay) * damp;
    }
  };
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = i * width, b = std::fmin(U, (i + 1) * width);
    const QuadResult r = integrate_gk(f, a, b, 1e-16, 1e-13);
    if (!r.converged)
      fail(ErrorCode::QuadratureFailure,
           "Fourier inversion did not converge (error estimate " + std::to_string(r.abs_error) + ")", "phi");
    total += r.value;
  }
  total /= kPi;
  if (order >= 1) total = -total;
  if (order == 1 && y < 0.0) total = -total;
  return total;
}

double StableDensity::eval(double y, int order) const {
  if (order < 0 || order > 2) fail(ErrorCode::DomainError, "derivative order must be 0, 1 or 2", "phi_deriv");
  if (!std::isfinite(y)) fail(ErrorCode::DomainError, "y must be finite", "phi");
  if (std::fabs(y) >= y_switch_) return series(y, order);
  if (std::fabs(y) > 50.0) warn("Fourier route used beyond |y| = 50; accuracy not guaranteed");
  return fourier(y, order);
}

void StableDensity::phi_and_deriv(double y, double& value, double& d1) const {
  if (std::fabs(y) >= y_switch_) {
    value = series(y, 0);
    d1 = series(y, 1);
    return;
  }
  const double beta = beta_;
  const double ay = std::fabs(y);
  const double U = fourier_cutoff(beta);
  const double width = ay > 0.0 ? std::fmin(kPi / ay, U / 16.0) : U / 16.0;
  const int panels = static_cast<int>(std::ceil(U / width));
  auto f = [&](double u, double& c0, double& c1) {
    const double damp = std::exp(-std::pow(u, beta));
    c0 = std::cos(u * ay) * damp;
    c1 = u * std::sin(u * ay) * damp;
  };
  double v0 = 0.0, v1 = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = i * width, b = std::fmin(U, (i + 1) * width);
    const QuadResult2 r = integrate_gk2(f, a, b, 1e-16, 1e-13);
    if (!r.converged) fail(ErrorCode::QuadratureFailure, "Fourier inversion did not converge", "phi");
    v0 += r.v0;
    v1 += r.v1;
  }
  value = v0 / kPi;
  d1 = -v1 / kPi;
  if (y < 0.0) d1 = -d1;
}

double phi(double beta, double y) { return StableDensity(beta).phi(y); }

double phi_deriv(double beta, double y, int order) { return StableDensity(beta).deriv(y, order); }

namespace {

struct HM {
  double h, m;
};

HM fisher_integrals(double beta) {
  const StableDensity dens(beta);
  const double ys = dens.switch_point();
  auto integrand = [&](double y, double& gh, double& gm) {
    double f, d;
    dens.phi_and_deriv(y, f, d);
    f = std::fmax(f, kPhiFloor);
    const double a = f + y * d;
    gh = a * a / f;
    gm = d * d / f;
  };
  double h = 0.0, m = 0.0, err = 0.0;
  bool ok = true;
  const int inner = static_cast<int>(std::ceil(ys));
  for (int i = 0; i < inner; ++i) {
    const double a = ys * i / inner, b = ys * (i + 1) / inner;
    const QuadResult2 r = integrate_gk2(integrand, a, b, 1e-13, 1e-10);
    h += r.v0;
    m += r.v1;
    err += r.err0 + r.err1;
    ok = ok && r.converged;
  }
  // y = ys·e^t on the tail, then the leading power-law remainder.
  const double t_max = 28.0 / beta;
  auto tail = [&](double t, double& gh, double& gm) {
    const double y = ys * std::exp(t);
    integrand(y, gh, gm);
    gh *= y;
    gm *= y;
  };
  const QuadResult2 r = integrate_gk2(tail, 0.0, t_max, 1e-14, 1e-10);
  h += r.v0;
  m += r.v1;
  err += r.err0 + r.err1;
  ok = ok && r.converged;
  const double Y = ys * std::exp(t_max);
  const double c = std::exp(log_gamma(beta + 1.0)) * std::sin(0.5 * kPi * beta) / kPi;
  h += beta * c * std::pow(Y, -beta);
  m += (beta + 1.0) * (beta + 1.0) * c * std::pow(Y, -beta - 2.0) / (beta + 2.0);
  if (!ok)
    fail(ErrorCode::QuadratureFailure,
         "Fisher integral did not converge (error estimate " + std::to_string(err) + ")", "h_beta");
  return {2.0 * h, 2.0 * m};
}

// Upper 26 significant bits of x, so that products of two such values are exact.
double split_hi(double x) {
  const double c = 134217729.0 * x;  // 2^27 + 1
  return c - (c - x);
}

}  // namespace

double h_beta(double beta) {
  check_beta(beta, "h_beta");
  return fisher_integrals(beta).h;
}

double m_beta(double beta) {
  check_beta(beta, "m_beta");
  return fisher_integrals(beta).m;
}

Mat3 fisher_matrix(double beta, double sigma) {
  check_beta(beta, "fisher_matrix");
  if (!(sigma > 0.0)) fail(ErrorCode::DomainError, "sigma must be > 0", "fisher_matrix");
  const HM hm = fisher_integrals(beta);
  // The (β, σ) block is H·w wᵀ with w = (1/β², 1/σ). The factors are rounded
  // to 26 bits so the block stays exactly rank one in floating point.
  const double s = std::sqrt(hm.h);
  const double w1 = split_hi(s / (beta * beta));
  const double w2 = split_hi(s / sigma);
  return {w1 * w1, w1 * w2, 0.0, w1 * w2, w2 * w2, 0.0, 0.0, 0.0, hm.m / (sigma * sigma)};
}

double median_asymptotic_sd(double beta, double sigma) {
  if (!(beta > 0.0 && beta < 2.0) || !(sigma > 0.0))
    fail(ErrorCode::DomainError, "need beta in (0,2) and sigma > 0", "median_asymptotic_sd");
  return sigma * kPi / (2.0 * gamma_fn(1.0 + 1.0 / beta));
}

}  // namespace levy
