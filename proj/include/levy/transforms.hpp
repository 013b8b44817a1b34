#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "levy/stable.hpp"
#include "levy/symmetric.hpp"

namespace levy {

enum class TransformKind { Symmetrized, Centered, Deskewed };

/// Non-overlapping block transform of an increment sample. `sample.h` keeps
/// the original step so the estimators see the same time scale.
struct TransformedSample {
  IncrementSample sample;
  std::size_t n_effective = 0;
  TransformKind kind = TransformKind::Symmetrized;
  double beta_used = 0.0;  // deskew only
};

std::string to_string(TransformKind kind);

/// Δ₂ₗ − Δ₂ₗ₋₁: S_β(2^{1/β}h^{1/β}σ, 0, 0).
TransformedSample symmetrize(const IncrementSample& sample);

/// Δ₃ₗ + Δ₃ₗ₋₂ − 2Δ₃ₗ₋₁: trend removed, skewness multiplied by (2−2^β)/(2+2^β).
TransformedSample center_triple(const IncrementSample& sample);

/// Δ₃ₗ + Δ₃ₗ₋₂ − 2^{1/β}Δ₃ₗ₋₁: symmetric with trend (2−2^{1/β})hγ.
TransformedSample deskew_triple(const IncrementSample& sample, double beta);

/// ρ ↦ ρ(2−2^β)/(2+2^β) under center_triple.
double center_skew_factor(double beta);
/// Per-entry trend multiplier (2−2^{1/β}) under deskew_triple.
double deskew_trend_factor(double beta);

struct PipelineOptions {
  std::string step1 = "log";  // "log" or "frac"
  double p = 0.1;             // fractional order when step1 == "frac"
};

struct PipelineResult {
  double beta_hat = 0.0;
  double sigma_hat = 0.0;
  double p_hat = 0.5;
  double rho_hat = 0.0;
  double gamma_hat = 0.0;
  // Intermediates.
  SymmetricEstimate step1;       // on the symmetrized sample, before dividing out 2^{1/β̂}
  double p_hat_centered = 0.5;   // sign statistic of the centered sample
  double rho_hat_centered = 0.0;
  bool rho_clamped = false;
  double median_deskewed = 0.0;  // median_gamma of the deskewed sample
  std::size_t n = 0;
};

/// Joint (β, σ, 𝔭, γ) estimation: symmetrize for (β, σ), center for 𝔭,
/// deskew at β̂ for γ. Errors name the failing step in their context.
PipelineResult full_pipeline(const IncrementSample& sample, const PipelineOptions& opts = {});

}  // namespace levy
