#include "levy/stable.hpp"

#include <cmath>
#include <string>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"
#include "levy/special_fn.hpp"

namespace levy {

void StableParams::validate() const {
  if (!(beta > 0.0 && beta <= 2.0)) fail(ErrorCode::DomainError, "beta must lie in (0, 2]", "StableParams");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorCode::DomainError, "sigma must be > 0", "StableParams");
  if (!(std::fabs(rho) <= 1.0)) fail(ErrorCode::DomainError, "rho must lie in [-1, 1]", "StableParams");
  if (!std::isfinite(gamma_trend)) fail(ErrorCode::DomainError, "gamma must be finite", "StableParams");
}

void PositivityStable::validate() const {
  if (!(beta > 1.0 && beta < 2.0)) fail(ErrorCode::DomainError, "beta must lie in (1, 2)", "PositivityStable");
  const double slack = 1e-12;
  if (!(p_pos >= 1.0 - 1.0 / beta - slack && p_pos <= 1.0 / beta + slack))
    fail(ErrorCode::DomainError,
         "positivity parameter " + std::to_string(p_pos) + " outside [1-1/beta, 1/beta]", "PositivityStable");
}

double sample_standard_stable(double beta, double rho, double u, double v) {
  if (!(beta > 0.0 && beta <= 2.0) || !(std::fabs(rho) <= 1.0))
    fail(ErrorCode::DomainError, "invalid (beta, rho)", "sample_standard_stable");
  if (beta == 2.0) return 2.0 * std::sin(u) * std::sqrt(v);
  if (beta == 1.0) {
    const double a = 0.5 * kPi + rho * u;
    return (2.0 / kPi) * (a * std::tan(u) - rho * std::log(0.5 * kPi * v * std::cos(u) / a));
  }
  const double t = rho * std::tan(0.5 * beta * kPi);
  const double A = std::pow(1.0 + t * t, 0.5 / beta);
  const double B = std::atan(t) / beta;
  const double bub = beta * (u + B);
  return A * std::sin(bub) / std::pow(std::cos(u), 1.0 / beta) *
         std::pow(std::cos(u - bub) / v, (1.0 - beta) / beta);
}

double standard_stable_draw(double beta, double rho, Rng& rng) {
  const double u = kPi * (rng.uniform() - 0.5);
  const double v = rng.exponential();
  return sample_standard_stable(beta, rho, u, v);
}

IncrementSample sample_increments(const StableParams& params, double h, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (!(h > 0.0)) fail(ErrorCode::DomainError, "h must be > 0", "sample_increments");
  if (n < 1) fail(ErrorCode::DomainError, "n must be >= 1", "sample_increments");
  double rho = params.rho;
  if (params.beta == 2.0 && rho != 0.0) {
    warn("beta = 2 makes rho unidentifiable; forcing rho = 0");
    rho = 0.0;
  }
  const double beta = params.beta, sigma = params.sigma, g = params.gamma_trend;
  IncrementSample out;
  out.h = h;
  out.model = "stable";
  out.values.resize(n);
  Rng rng(seed);
  if (beta == 1.0) {
    const double hs = h * sigma;
    const double shift = (2.0 * hs * rho / kPi) * std::log(hs) + h * g;
    for (std::size_t j = 0; j < n; ++j) out.values[j] = hs * standard_stable_draw(beta, rho, rng) + shift;
  } else {
    const double scale = std::pow(h, 1.0 / beta) * sigma;
    const double shift = h * g;
    for (std::size_t j = 0; j < n; ++j) out.values[j] = scale * standard_stable_draw(beta, rho, rng) + shift;
  }
  return out;
}

namespace {

void check_skew_beta(double beta, const char* ctx) {
  if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
    fail(ErrorCode::DomainError, "skew relation needs beta in (0,1) or (1,2)", ctx);
}

}  // namespace

double skew_to_positivity(double beta, double rho) {
  check_skew_beta(beta, "skew_to_positivity");
  if (!(std::fabs(rho) <= 1.0)) fail(ErrorCode::DomainError, "rho must lie in [-1, 1]", "skew_to_positivity");
  return 0.5 + std::atan(rho * std::tan(0.5 * beta * kPi)) / (beta * kPi);
}

double positivity_to_skew(double beta, double p_pos) {
  check_skew_beta(beta, "positivity_to_skew");
  const double rho = std::tan(beta * kPi * (p_pos - 0.5)) / std::tan(0.5 * beta * kPi);
  const double xi = beta * kPi * (p_pos - 0.5);
  if (!(std::fabs(xi) < 0.5 * kPi) || !(std::fabs(rho) <= 1.0 + 1e-12))
    fail(ErrorCode::DomainError, "positivity parameter " + std::to_string(p_pos) + " outside admissible region",
         "positivity_to_skew");
  return std::fmax(-1.0, std::fmin(1.0, rho));
}

double sprime_increment_sampler(const PositivityStable& pos, double scale, Rng& rng) {
  if (!(scale > 0.0)) fail(ErrorCode::DomainError, "scale must be > 0", "sprime_increment_sampler");
  const double rho = positivity_to_skew(pos.beta, pos.p_pos);
  return std::pow(scale, 1.0 / pos.beta) * standard_stable_draw(pos.beta, rho, rng);
}

ScalePath cosine_path() {
  ScalePath p;
  p.name = "cosine";
  p.sigma_pow_beta = [](double s) { return 0.4 * (std::cos(2.0 * kPi * s) + 1.5); };
  p.sigma_bar = [](std::size_t j, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double a = std::sin(2.0 * kPi * static_cast<double>(j) / nn);
    const double b = std::sin(2.0 * kPi * static_cast<double>(j - 1) / nn);
    return 0.4 * (nn * (a - b) / (2.0 * kPi) + 1.5);
  };
  return p;
}

ScalePath constant_path(double c) {
  ScalePath p;
  p.name = "constant";
  p.sigma_pow_beta = [c](double) { return c; };
  p.sigma_bar = [c](std::size_t, std::size_t) { return c; };
  return p;
}

double sigma_bar(const ScalePath& path, std::size_t j, std::size_t n) {
  if (j < 1 || j > n) fail(ErrorCode::DomainError, "block index out of range", "sigma_bar");
  if (path.sigma_bar) return path.sigma_bar(j, n);
  if (!path.sigma_pow_beta) fail(ErrorCode::InvalidConfig, "scale path has no evaluator", "sigma_bar");
  const double nn = static_cast<double>(n);
  const double a = static_cast<double>(j - 1) / nn, b = static_cast<double>(j) / nn;
  const QuadResult r = integrate_gk(path.sigma_pow_beta, a, b, 0.0, 1e-12);
  if (!r.converged) fail(ErrorCode::QuadratureFailure, "scale path quadrature did not converge", "sigma_bar");
  return nn * r.value;
}

IncrementSample sample_timevarying(const ScalePath& path, const PositivityStable& pos, std::size_t n,
                                   std::uint64_t seed) {
  pos.validate();
  if (n < 1) fail(ErrorCode::DomainError, "n must be >= 1", "sample_timevarying");
  const double rho = positivity_to_skew(pos.beta, pos.p_pos);
  const double inv_beta = 1.0 / pos.beta;
  const double nn = static_cast<double>(n);
  IncrementSample out;
  out.h = 1.0 / nn;
  out.model = "timevarying";
  out.values.resize(n);
  Rng rng(seed);
  for (std::size_t j = 0; j < n; ++j) {
    const double sb = sigma_bar(path, j + 1, n);
    if (!(sb > 0.0)) fail(ErrorCode::DomainError, "scale path must stay positive", "sample_timevarying");
    out.values[j] = std::pow(sb / nn, inv_beta) * standard_stable_draw(pos.beta, rho, rng);
  }
  return out;
}

}  // namespace levy
