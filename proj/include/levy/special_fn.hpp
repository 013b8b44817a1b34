#pragma once

#include <functional>

namespace levy {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kZeta3 = 1.20205690315959428539973816151144999;

constexpr double euler_gamma() { return kEulerGamma; }
constexpr double zeta3() { return kZeta3; }

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Γ(x) on the real line, excluding non-positive integers. Negative
/// arguments go through the reflection formula.
double gamma_fn(double x);

/// ψ(x) for x > 0.
double digamma(double x);

/// ln x − ψ(x), accurate for large x where the two terms nearly cancel.
double log_minus_digamma(double x);

/// Standard normal quantile (Wichura's AS241).
double normal_quantile(double prob);

struct RootBracket {
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-12;
  int max_iter = 200;
};

/// Brent's method with a bisection safeguard. `f` must change sign on the
/// bracket; throws NoSignChange otherwise.
double find_root_monotone(const std::function<double(double)>& f, const RootBracket& bracket);

}  // namespace levy
