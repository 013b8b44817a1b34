#pragma once

#include "levy/linalg.hpp"

namespace levy {

/// Symmetric standard stable density φ_β and its first two derivatives.
/// Near the origin the Fourier inversion integral is evaluated with
/// half-period panels; beyond a β-dependent switch point the tail power
/// series is summed instead.
class StableDensity {
 public:
  explicit StableDensity(double beta);

  double beta() const { return beta_; }
  double switch_point() const { return y_switch_; }

  double phi(double y) const { return eval(y, 0); }
  double deriv(double y, int order) const { return eval(y, order); }

  /// Value and first derivative from one pass.
  void phi_and_deriv(double y, double& value, double& d1) const;

  /// Route-forced evaluation, exposed for cross-checks between the two.
  double fourier(double y, int order) const;
  double series(double y, int order) const;

 private:
  double eval(double y, int order) const;
  bool series_ok(double y) const;

  double beta_;
  double y_switch_;
};

double phi(double beta, double y);
double phi_deriv(double beta, double y, int order);

/// H_β = ∫{φ + yφ′}²/φ dy and M_β = ∫(φ′)²/φ dy.
double h_beta(double beta);
double m_beta(double beta);

/// I(θ) for θ = (β, σ, γ); singular top-left block by construction.
Mat3 fisher_matrix(double beta, double sigma);

/// σπ/(2Γ(1 + 1/β)).
double median_asymptotic_sd(double beta, double sigma);

}  // namespace levy
