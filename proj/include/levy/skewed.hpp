#pragma once

#include <string>
#include <vector>

#include "levy/linalg.hpp"
#include "levy/stable.hpp"

namespace levy {

using MultiIndex = std::vector<double>;

struct SkewedEstimate {
  std::string method;        // "sign_bipower" or "tripower"
  std::string scale_target;  // "sigma" (constant scale) or "integrated" (∫σ^β)
  double q = 0.25;
  double p_hat = 0.5;
  double beta_hat = 0.0;
  double scale_hat = 0.0;
  double sigma_star_2q = 0.0;
  double sigma_star_4q = 0.0;
  std::size_t n = 0;
  double h = 1.0;
  // V for √n(𝔭̂ − 𝔭, β̂ − β, σ̂*_{2q} − σ*_{2q}); NaN when it cannot be formed.
  Mat3 cov{};
};

/// 𝔭̂ = (mean sgn Δ + 1)/2. Zero increments count as sign 0 and trigger a warning.
double sign_statistic(const IncrementSample& sample);

/// r-th absolute and signed-absolute moments of S′_β(𝔭, 1).
double mu_abs(double beta, double p_pos, double r);
double nu_signed(double beta, double p_pos, double r);

/// μ(r; 𝔭, β) = Π_l μ_{r_l}.
double mu_multi(double beta, double p_pos, const MultiIndex& r);

/// M_n(r) = (1/n)Σ_j Π_l |n^{1/β}Δ_{j+l−1}|^{r_l}.
double mpv(const IncrementSample& sample, double beta, const MultiIndex& r);

/// Root of the bipower estimating equation on (max(4q, 1), 2).
double bipower_beta(const IncrementSample& sample, double p_hat, double q);

/// Right-hand side of the bipower equation at β.
double bipower_rhs(double beta, double p_hat, double q);

/// σ̂*_{power} for power = 2q (single power) or 4q (lag-one bipower).
double sigma_star_power(const IncrementSample& sample, double p_hat, double beta_hat, double q, bool four_q);

/// σ̂*_β = M*_n(β̂)/μ_{β̂/3}³ with M*_n = Σ_j Π_{l=1}^{3}|Δ_{j+l−1}|^{β̂/3}.
double tripower_integrated_scale(const IncrementSample& sample, double p_hat, double beta_hat);

/// Σ of the sign/MPV vector for r₊ = r′₊ = p, given σ*_p and σ*_{2p}.
Mat3 mpv_cov(double beta, double p_pos, const MultiIndex& r, const MultiIndex& r_prime, double sigma_star_p,
             double sigma_star_2p);

/// (∇F)⁻¹ Σ (∇F)⁻ᵀ evaluated at s = σ*_p.
Mat3 delta_cov(double beta, double p_pos, const MultiIndex& r, const MultiIndex& r_prime, double sigma_star_p,
               double sigma_star_2p);

/// Constant-scale skewed model: 𝔭̂, β̂ by bipower, σ̂ = (σ̂*_{2q})^{1/(2q)}.
SkewedEstimate sign_bipower_estimate(const IncrementSample& sample, double q = 0.25);

/// Time-varying scale: 𝔭̂, β̂ as above, then the tripower integrated scale.
SkewedEstimate tripower_estimate(const IncrementSample& sample, double q = 0.25);

}  // namespace levy
