#include <algorithm>
#include <cmath>
#include <vector>

#include "levy/special_fn.hpp"
#include "levy/stable.hpp"
#include "test_util.hpp"

using namespace levy;
using levy::test::close_rel;

namespace {

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double var_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST_CASE("CMS sampler closed forms") {
  for (double u : {-1.2, -0.3, 0.1, 0.9, 1.4}) {
    for (double v : {0.2, 1.0, 3.5}) {
      CHECK(close_rel(sample_standard_stable(1.0, 0.0, u, v), std::tan(u), 1e-14));
      CHECK(close_rel(sample_standard_stable(2.0, 0.0, u, v), 2.0 * std::sin(u) * std::sqrt(v), 1e-14));
      CHECK(sample_standard_stable(0.5, 1.0, u, v) > 0.0);
      CHECK(sample_standard_stable(0.5, -1.0, u, v) < 0.0);
    }
  }
  CHECK(levy::test::error_code_of([] { sample_standard_stable(2.5, 0.0, 0.1, 1.0); }) == ErrorCode::DomainError);
}

TEST_CASE("Gaussian reduction: variance 2") {
  const auto s = sample_increments({2.0, 1.0, 0.0, 0.0}, 1.0, 100000, 11);
  const double se_mean = std::sqrt(2.0 / 1e5);
  const double se_var = std::sqrt(2.0 * 4.0 / 1e5);
  CHECK(std::fabs(mean_of(s.values)) < 3.0 * se_mean);
  CHECK(std::fabs(var_of(s.values) - 2.0) < 3.0 * se_var);
}

TEST_CASE("Cauchy quartiles") {
  auto s = sample_increments({1.0, 1.0, 0.0, 0.0}, 1.0, 100000, 12);
  std::sort(s.values.begin(), s.values.end());
  // Quantile standard error: sqrt(p(1−p)/n)/f(x_p) with f(±1) = 1/(2π).
  const double se = std::sqrt(0.25 * 0.75 / 1e5) * 2.0 * kPi;
  CHECK(std::fabs(s.values[25000] + 1.0) < 3.5 * se);
  CHECK(std::fabs(s.values[75000] - 1.0) < 3.5 * se);
}

TEST_CASE("sample_increments scale and trend") {
  const StableParams p{1.5, 0.5, 0.0, -0.5};
  const double h = 5.0 / 2001.0;
  const auto a = sample_increments(p, h, 2001, 7);
  const auto b = sample_increments({1.5, 1.0, 0.0, 0.0}, 1.0, 2001, 7);
  const double scale = std::pow(h, 1.0 / 1.5) * 0.5;
  for (std::size_t j = 0; j < a.values.size(); ++j) CHECK(close_rel(a.values[j], scale * b.values[j] + h * -0.5, 1e-12));
  CHECK(a.h == h);
  CHECK(a.T() == doctest::Approx(5.0));
}

TEST_CASE("beta = 2 forces rho = 0 with a warning") {
  levy::test::WarningCounter wc;
  const auto a = sample_increments({2.0, 1.0, 0.7, 0.0}, 1.0, 10, 3);
  const auto b = sample_increments({2.0, 1.0, 0.0, 0.0}, 1.0, 10, 3);
  CHECK(levy::test::WarningCounter::count == 1);
  CHECK(a.values == b.values);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK(levy::test::error_code_of([] { sample_increments({0.0, 1.0, 0.0, 0.0}, 1.0, 5, 1); }) ==
        ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { sample_increments({1.5, -1.0, 0.0, 0.0}, 1.0, 5, 1); }) ==
        ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { sample_increments({1.5, 1.0, 1.5, 0.0}, 1.0, 5, 1); }) ==
        ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { sample_increments({1.5, 1.0, 0.0, 0.0}, 0.0, 5, 1); }) ==
        ErrorCode::DomainError);
}

TEST_CASE("skew and positivity conversions") {
  CHECK(skew_to_positivity(1.5, 0.0) == 0.5);
  CHECK(skew_to_positivity(0.7, 0.0) == 0.5);
  CHECK(std::fabs(skew_to_positivity(1.5, -0.5) - 0.5984) < 5e-5);
  CHECK(close_rel(skew_to_positivity(1.2, -0.5), 0.763808342156759420, 1e-13));
  for (double beta : {0.6, 1.2, 1.5, 1.9})
    for (double rho : {-1.0, -0.4, 0.0, 0.3, 1.0})
      CHECK(std::fabs(positivity_to_skew(beta, skew_to_positivity(beta, rho)) - rho) < 1e-12);
  CHECK(levy::test::error_code_of([] { skew_to_positivity(1.0, 0.2); }) == ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { positivity_to_skew(1.5, 0.9); }) == ErrorCode::DomainError);
}

TEST_CASE("scale paths") {
  const auto cp = cosine_path();
  CHECK(close_rel(sigma_bar(cp, 1, 4), 4.0 * (1.0 / (5.0 * kPi) + 3.0 / 20.0), 1e-14));
  CHECK(close_rel(sigma_bar(cp, 1, 4), 0.854647908947032537, 1e-14));
  double mean = 0.0;
  for (std::size_t j = 1; j <= 1000; ++j) mean += sigma_bar(cp, j, 1000) / 1000.0;
  CHECK(close_rel(mean, 0.6, 1e-12));
  ScalePath numeric;
  numeric.sigma_pow_beta = cp.sigma_pow_beta;
  for (std::size_t j : {1, 2, 7, 13})
    CHECK(close_rel(sigma_bar(numeric, j, 13), sigma_bar(cp, j, 13), 1e-11));
  CHECK(levy::test::error_code_of([&] { sigma_bar(cp, 0, 4); }) == ErrorCode::DomainError);
}

TEST_CASE("constant path reduces to the S' sampler with scale 1/n") {
  const PositivityStable pos{1.5, 0.5984};
  const std::size_t n = 200;
  const auto a = sample_timevarying(constant_path(1.0), pos, n, 99);
  Rng rng(99);
  for (std::size_t j = 0; j < n; ++j)
    CHECK(close_rel(a.values[j], sprime_increment_sampler(pos, 1.0 / n, rng), 1e-13));
  CHECK(a.h == doctest::Approx(1.0 / n));
}

TEST_CASE("S' positivity fraction") {
  for (double p : {0.5, 0.5984}) {
    const PositivityStable pos{1.5, p};
    Rng rng(derive_seed({42, static_cast<std::uint64_t>(p * 1e4)}));
    int pos_count = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) pos_count += sprime_increment_sampler(pos, 1.0, rng) > 0.0;
    const double frac = static_cast<double>(pos_count) / n;
    CHECK(std::fabs(frac - p) < 3.0 * std::sqrt(p * (1 - p) / n));
    CHECK(std::fabs(frac - p) < 0.005);
  }
  CHECK(levy::test::error_code_of([] { PositivityStable{1.5, 0.9}.validate(); }) == ErrorCode::DomainError);
}

TEST_CASE("derive_seed is order sensitive and reproducible") {
  CHECK(derive_seed({1, 2, 3}) == derive_seed({1, 2, 3}));
  CHECK(derive_seed({1, 2, 3}) != derive_seed({3, 2, 1}));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(6);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK((u > 0.0 && u < 1.0));
  }
}

TEST_CASE("gamma variate mean and tiny shapes") {
  Rng rng(17);
  for (double shape : {0.3, 2.5}) {
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += rng.gamma_variate(shape);
    CHECK(std::fabs(s / n - shape) < 3.0 * std::sqrt(shape / n));
  }
  const double lg = rng.log_gamma_variate(1e-9);
  CHECK(std::isfinite(lg));
}
