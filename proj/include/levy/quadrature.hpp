#pragma once

#include <cmath>
#include <functional>

namespace levy {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
};

/// Global adaptive Gauss–Kronrod (7/15): the segment with the largest error
/// estimate is bisected until the summed error is below
/// max(abs_tol, rel_tol·|I|) or the roundoff floor 50·eps·∫|f|.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        double rel_tol, int max_depth = 40);

/// Same rule for a pair of integrands sharing one evaluation, with a
/// common subdivision.
struct QuadResult2 {
  double v0 = 0.0, v1 = 0.0;
  double err0 = 0.0, err1 = 0.0;
  bool converged = true;
};
QuadResult2 integrate_gk2(const std::function<void(double, double&, double&)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth = 40);

}  // namespace levy
