#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levy/rng.hpp"

namespace levy {

/// S_β(σ, ρ, γ): log cf −σ^β|u|^β(1 − iρ sgn(u) tan(βπ/2)) + iγu for β ≠ 1.
struct StableParams {
  double beta = 2.0;
  double sigma = 1.0;
  double rho = 0.0;
  double gamma_trend = 0.0;

  void validate() const;
};

/// S′_β(𝔭, ·) with 𝔭 = P(S > 0).
struct PositivityStable {
  double beta = 1.5;
  double p_pos = 0.5;

  void validate() const;
};

struct IncrementSample {
  std::vector<double> values;
  double h = 1.0;
  std::string model;

  std::size_t n() const { return values.size(); }
  double T() const { return static_cast<double>(values.size()) * h; }
};

/// A deterministic scale path on [0, 1]. `sigma_pow_beta` is s ↦ σ_s^β;
/// `sigma_bar` optionally gives n∫σ_s^β ds over ((j−1)/n, j/n] in closed
/// form (j is 1-based).
struct ScalePath {
  std::function<double(double)> sigma_pow_beta;
  std::function<double(std::size_t j, std::size_t n)> sigma_bar;
  std::string name;
};

/// σ_s^β = (2/5)(cos 2πs + 3/2), whose integral over [0, 1] is 0.6.
ScalePath cosine_path();
ScalePath constant_path(double sigma_pow_beta = 1.0);

/// σ̄_j for the path, by closed form when present, else adaptive quadrature.
double sigma_bar(const ScalePath& path, std::size_t j, std::size_t n);

/// One S_β(1, ρ, 0) draw from U ∈ (−π/2, π/2) and V ~ Exp(1).
double sample_standard_stable(double beta, double rho, double u, double v);

double standard_stable_draw(double beta, double rho, Rng& rng);

IncrementSample sample_increments(const StableParams& params, double h, std::size_t n, std::uint64_t seed);

double skew_to_positivity(double beta, double rho);
double positivity_to_skew(double beta, double p_pos);

/// One S′_β(𝔭, scale) draw.
double sprime_increment_sampler(const PositivityStable& pos, double scale, Rng& rng);

/// Δ_j = (σ̄_j/n)^{1/β} ζ_j with ζ_j i.i.d. S′_β(𝔭, 1), h = 1/n.
IncrementSample sample_timevarying(const ScalePath& path, const PositivityStable& pos, std::size_t n,
                                   std::uint64_t seed);

}  // namespace levy
