#pragma once

#include <cstdint>

#include "levy/linalg.hpp"
#include "levy/stable.hpp"

namespace levy {

/// L(X_t) = Γ(δt, γ): shape δt, rate γ.
struct GammaSubParams {
  double delta = 1.0;
  double gamma_rate = 1.0;
};

/// L(X_t) = IG(δt, γ), with E X_t = δt/γ.
struct IGSubParams {
  double delta = 1.0;
  double gamma_ig = 1.0;
};

struct SubordinatorEstimate {
  double delta_hat = 0.0;
  double gamma_hat = 0.0;
  Mat2 cov{};  // for the moment estimator: asymptotic covariance of (δ̂, γ̂)
};

IncrementSample sample_gamma_sub(const GammaSubParams& params, double h, std::size_t n, std::uint64_t seed);
IncrementSample sample_ig_sub(const IGSubParams& params, double h, std::size_t n, std::uint64_t seed);

/// Left-hand side n·h·{ln(δh) − ψ(δh)} of the gamma score equation.
double gamma_mle_lhs(double delta, double h, std::size_t n);

/// δ̂ solving gamma_mle_lhs(δ, h, n) = K for K > 0.
double gamma_mle_delta(double K, double h, std::size_t n);

SubordinatorEstimate gamma_mle(const IncrementSample& sample);
SubordinatorEstimate gamma_moment_estimate(const IncrementSample& sample);
SubordinatorEstimate ig_mle(const IncrementSample& sample);

Mat2 gamma_fisher(const GammaSubParams& params);
Mat2 ig_fisher(const IGSubParams& params);

}  // namespace levy
