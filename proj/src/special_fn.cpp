#include "levy/special_fn.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "levy/error.hpp"

namespace levy {

namespace {

// Stirling remainder for x >= 15: ln Γ(x) − [(x−½)ln x − x + ½ln 2π].
double stirling_tail(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 +
              r2 * (-1.0 / 360 +
                    r2 * (1.0 / 1260 +
                          r2 * (-1.0 / 1680 +
                                r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
}

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640561764;

template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) fail(ErrorCode::DomainError, "log_gamma requires x > 0, got " + std::to_string(x), "log_gamma");
  if (std::isinf(x)) return x;
  double shift = 0.0;
  if (x < 15.0) {
    double prod = 1.0;
    while (x < 15.0) {
      prod *= x;
      x += 1.0;
    }
    shift = std::log(prod);
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + stirling_tail(x) - shift;
}

double gamma_fn(double x) {
  if (x > 0.0) {
    if (x > 171.7) return std::numeric_limits<double>::infinity();
    return std::exp(log_gamma(x));
  }
  if (x == std::floor(x)) fail(ErrorCode::DomainError, "gamma pole at non-positive integer", "gamma_fn");
  return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
}

double digamma(double x) {
  if (!(x > 0.0)) fail(ErrorCode::DomainError, "digamma requires x > 0, got " + std::to_string(x), "digamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  return acc + std::log(x) - log_minus_digamma(x);
}

double log_minus_digamma(double x) {
  if (!(x > 0.0))
    fail(ErrorCode::DomainError, "log_minus_digamma requires x > 0", "log_minus_digamma");
  if (x < 10.0) return std::log(x) - digamma(x);
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r2 * (1.0 / 12 +
            r2 * (-1.0 / 120 +
                  r2 * (1.0 / 252 +
                        r2 * (-1.0 / 240 + r2 * (1.0 / 132 + r2 * (-691.0 / 32760 + r2 * (1.0 / 12)))))));
  return 0.5 * r + series;
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    fail(ErrorCode::DomainError, "normal_quantile requires prob in (0,1)", "normal_quantile");
  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0,
                                 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0,
                                 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0,
                                 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};
  const double q = prob - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? prob : 1.0 - prob));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    val = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -val : val;
}

double find_root_monotone(const std::function<double(double)>& f, const RootBracket& br) {
  if (!(br.lo < br.hi) || !(br.tol > 0.0) || br.max_iter < 1)
    fail(ErrorCode::DomainError, "invalid root bracket", "find_root_monotone");
  double a = br.lo, b = br.hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0))
    fail(ErrorCode::NoSignChange,
         "objective does not change sign on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
         "find_root_monotone");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < br.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * br.tol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol1 || fb == 0.0) return b;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb))
      fail(ErrorCode::DomainError, "objective is not finite at " + std::to_string(b), "find_root_monotone");
  }
  fail(ErrorCode::MaxIterExceeded, "root search did not converge in " + std::to_string(br.max_iter) + " iterations",
       "find_root_monotone");
}

}  // namespace levy
