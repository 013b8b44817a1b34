#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "levy/linalg.hpp"
#include "levy/stable.hpp"

namespace levy {

struct SymmetricEstimate {
  std::string method;  // "log_moment" or "frac_moment"
  double p = 0.0;      // fractional order, frac_moment only
  double beta_hat = 0.0;
  double sigma_hat = 0.0;
  double gamma_hat = 0.0;
  std::size_t n_used = 0;
  double h = 1.0;
  Mat3 cov{};  // asymptotic covariance at the estimates; NaN when beta_hat ∉ (0, 2)
};

struct LogMomentStats {
  double nu1, nu2, nu3, nu4;
};

/// Residuals about the sample median. An even-length sample loses its last
/// increment first, so n_used = 2k + 1.
struct MedianResiduals {
  double median = 0.0;
  std::size_t k = 0;
  std::size_t n_used = 0;
  std::vector<double> all;        // x_j − m for every retained j, median index included
  std::vector<double> off_median; // the 2k residuals with the median index removed
};

MedianResiduals median_residuals(const IncrementSample& sample);

double median_gamma(const IncrementSample& sample);

SymmetricEstimate log_moment_estimate(const IncrementSample& sample);
LogMomentStats log_moment_nu(double beta, double sigma);
Mat3 v_log(double beta, double sigma);

double psi_transform(double x);
double beta_inv_sq_unbiased(const IncrementSample& sample);

double known_scale_beta(const IncrementSample& sample, double sigma);

/// C(β, q) = E|Y|^q for Y ~ S_β(1).
double c_moment(double beta, double q);

SymmetricEstimate frac_moment_estimate(const IncrementSample& sample, double p);
Mat3 v_p(double beta, double sigma, double p);

std::pair<double, double> gamma_confidence_interval(const SymmetricEstimate& est, double level);

}  // namespace levy
