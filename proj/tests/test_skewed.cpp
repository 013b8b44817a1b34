#include <array>
#include <cmath>
#include <vector>

#include "levy/skewed.hpp"
#include "levy/special_fn.hpp"
#include "levy/symmetric.hpp"
#include "test_util.hpp"

using namespace levy;
using levy::test::close_rel;

namespace {

constexpr double kP = 0.5984;  // P(S > 0) for β = 1.5, ρ = −0.5, rounded as in the designs

IncrementSample make(std::vector<double> v, double h) {
  IncrementSample s;
  s.values = std::move(v);
  s.h = h;
  return s;
}

IncrementSample sprime_iid(double beta, double p, std::size_t n, std::uint64_t seed) {
  return sample_timevarying(constant_path(1.0), {beta, p}, n, seed);
}

struct Moments {
  double mean = 0, var = 0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= x.size();
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= (x.size() - 1);
  return m;
}

}  // namespace

TEST_CASE("sign_statistic") {
  CHECK(close_rel(sign_statistic(make({1, -1, 2}, 1.0)), 2.0 / 3.0, 1e-15));
  CHECK(sign_statistic(make({1, 2, 3}, 1.0)) == 1.0);
  CHECK(sign_statistic(make({-1, -2}, 1.0)) == 0.0);
  CHECK(sign_statistic(make({3, -1, 1, -3}, 1.0)) == 0.5);
  levy::test::WarningCounter wc;
  CHECK(sign_statistic(make({0, 1, -1}, 1.0)) == 0.5);
  CHECK(levy::test::WarningCounter::count == 1);
}

TEST_CASE("absolute and signed moments") {
  for (double r : {-0.5, 0.25, 0.5, 1.0}) CHECK(nu_signed(1.5, 0.5, r) == doctest::Approx(0.0).epsilon(1e-15));
  for (double beta : {1.2, 1.5, 1.9})
    for (double r : {-0.4, 0.1, 0.25, 0.5, 0.9})
      CHECK(close_rel(mu_abs(beta, 0.5, r), c_moment(beta, r), 1e-9));
  CHECK(mu_abs(1.5, kP, 0.0) == 1.0);
  CHECK(mu_multi(1.5, kP, {0.25, 0.25}) == doctest::Approx(std::pow(mu_abs(1.5, kP, 0.25), 2)));
  CHECK(levy::test::error_code_of([] { mu_abs(1.5, kP, 1.5); }) == ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { nu_signed(1.5, kP, -1.0); }) == ErrorCode::DomainError);
}

TEST_CASE("MC: mu_abs and nu_signed at a skewed law") {
  Rng rng(101);
  const PositivityStable pos{1.5, kP};
  const int n = 1000000;
  double sa = 0, sa2 = 0, ss = 0;
  for (int i = 0; i < n; ++i) {
    const double z = sprime_increment_sampler(pos, 1.0, rng);
    const double a = std::sqrt(std::fabs(z));
    sa += a;
    sa2 += a * a;
    ss += (z > 0 ? a : -a);
  }
  const double m = sa / n;
  const double se = std::sqrt((sa2 / n - m * m) / n);
  CHECK(std::fabs(m - mu_abs(1.5, kP, 0.5)) < 1e-3);
  CHECK(std::fabs(m - mu_abs(1.5, kP, 0.5)) < 4.0 * se);
  CHECK(std::fabs(ss / n - nu_signed(1.5, kP, 0.5)) < 4.0 * std::sqrt(sa2 / n / n));
}

TEST_CASE("mpv") {
  const auto s = make({0.3, -1.2, 2.0, 0.7}, 0.25);
  CHECK(mpv(s, 1.5, {0.0}) == doctest::Approx(1.0));
  const std::size_t n = 50;
  const double c = 0.04, q = 0.25, beta = 1.5;
  const auto k = make(std::vector<double>(n, c), 1.0 / n);
  CHECK(close_rel(mpv(k, beta, {q, q}), (n - 1.0) / n * std::pow(std::pow(n, 1 / beta) * c, 2 * q), 1e-13));
  CHECK(levy::test::error_code_of([&] { mpv(s, 1.5, {}); }) == ErrorCode::DomainError);
}

TEST_CASE("MC: mpv law of large numbers and the ratio identity") {
  const std::size_t n = 10000;
  std::vector<double> m1, ratio;
  for (int r = 0; r < 40; ++r) {
    const auto s = sprime_iid(1.5, kP, n, derive_seed({102, static_cast<std::uint64_t>(r)}));
    const double a = mpv(s, 1.5, {0.5, 0.0});
    m1.push_back(a);
    ratio.push_back(mpv(s, 1.5, {0.25, 0.25}) / a);
  }
  const auto mm = moments(m1), mr = moments(ratio);
  const double t1 = mu_abs(1.5, kP, 0.5) * (n - 1.0) / n;
  const double mq = mu_abs(1.5, kP, 0.25);
  CHECK(std::fabs(mm.mean - t1) < 3.0 * std::sqrt(mm.var / m1.size()));
  CHECK(std::fabs(mr.mean - mq * mq / mu_abs(1.5, kP, 0.5)) < 3.0 * std::sqrt(mr.var / ratio.size()) + 1e-4);
}

TEST_CASE("bipower right-hand side") {
  for (double beta : {1.1, 1.5, 1.9}) {
    const double c2check = bipower_rhs(beta, 0.5, 0.2);
    const double mq = c_moment(beta, 0.2);
    CHECK(close_rel(c2check, mq * mq / c_moment(beta, 0.4), 1e-10));
  }
  CHECK(close_rel(bipower_rhs(1.5, 0.5, 0.2), mu_abs(1.5, 0.5, 0.2) * mu_abs(1.5, 0.5, 0.2) / mu_abs(1.5, 0.5, 0.4),
                  1e-10));
  for (double q : {0.2, 0.25}) {
    double prev = bipower_rhs(std::fmax(4 * q, 1.0) + 1e-3, 0.6, q);
    for (double b = std::fmax(4 * q, 1.0) + 2e-3; b < 2.0; b += 1e-3) {
      const double v = bipower_rhs(b, 0.6, q);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("bipower root solves its equation") {
  const auto s = sprime_iid(1.5, kP, 5000, 103);
  const double p = sign_statistic(s);
  const double b = bipower_beta(s, p, 0.25);
  double num = 0, den = 0;
  for (std::size_t j = 0; j + 1 < s.values.size(); ++j)
    num += std::pow(std::fabs(s.values[j]), 0.25) * std::pow(std::fabs(s.values[j + 1]), 0.25);
  for (double v : s.values) den += std::sqrt(std::fabs(v));
  CHECK(std::fabs(bipower_rhs(b, p, 0.25) - num / den) < 1e-12);
}

TEST_CASE("homogeneity of the scale estimators") {
  const auto s = sprime_iid(1.5, kP, 3000, 104);
  auto t = s;
  const double c = 2.3;
  for (auto& v : t.values) v *= c;
  CHECK(close_rel(sigma_star_power(t, kP, 1.5, 0.25, false), std::pow(c, 0.5) * sigma_star_power(s, kP, 1.5, 0.25, false),
                  1e-12));
  CHECK(close_rel(tripower_integrated_scale(t, kP, 1.5), std::pow(c, 1.5) * tripower_integrated_scale(s, kP, 1.5), 1e-12));
}

TEST_CASE("MC: scale estimators at the true parameters") {
  const std::size_t n = 10000;
  std::vector<double> s2q, tri;
  for (int r = 0; r < 40; ++r) {
    const auto s = sprime_iid(1.5, kP, n, derive_seed({105, static_cast<std::uint64_t>(r)}));
    s2q.push_back(sigma_star_power(s, kP, 1.5, 0.25, false));
    tri.push_back(tripower_integrated_scale(s, kP, 1.5));
  }
  const auto a = moments(s2q), b = moments(tri);
  CHECK(std::fabs(a.mean - 1.0) < 3.0 * std::sqrt(a.var / s2q.size()));
  CHECK(std::fabs(b.mean - (n - 2.0) / n) < 3.0 * std::sqrt(b.var / tri.size()));
}

TEST_CASE("mpv covariance structure") {
  const Mat3 s = mpv_cov(1.5, 0.5, {0.5, 0.0}, {0.25, 0.25}, 1.0, 1.0);
  CHECK(s[0] == 1.0);
  const Mat3 one = mpv_cov(1.5, kP, {0.5}, {0.5}, 1.0, 1.0);
  const double m1 = mu_abs(1.5, kP, 0.5);
  CHECK(close_rel(one[4], mu_abs(1.5, kP, 1.0) - m1 * m1, 1e-12));
  CHECK(levy::test::error_code_of([] { mpv_cov(1.5, kP, {0.5}, {0.25}, 1, 1); }) == ErrorCode::DomainError);
}

namespace {

// Replication variances of √n(𝔭̂ − 𝔭, β̂ − β, σ̃* − σ*) where σ̃* normalizes by n^{2q/β} at the true β.
// The feasible σ̂*_{2q} plugs in n^{2q/β̂} and converges only at rate √n/ln n.
std::array<double, 3> replication_variances(std::size_t n, int reps, std::uint64_t stream) {
  const double q = 0.25;
  std::vector<double> a, b, c;
  const double rt = std::sqrt(static_cast<double>(n));
  for (int r = 0; r < reps; ++r) {
    const auto s = sprime_iid(1.5, kP, n, derive_seed({stream, static_cast<std::uint64_t>(r)}));
    const SkewedEstimate e = sign_bipower_estimate(s, q);
    const double infeasible = e.sigma_star_2q * std::pow(static_cast<double>(n), 2 * q / 1.5 - 2 * q / e.beta_hat);
    a.push_back(rt * (e.p_hat - kP));
    b.push_back(rt * (e.beta_hat - 1.5));
    c.push_back(rt * (infeasible - 1.0));
  }
  return {moments(a).var, moments(b).var, moments(c).var};
}

}  // namespace

TEST_CASE("MC: delta-method covariance against replication covariance") {
  const Mat3 v = delta_cov(1.5, kP, {0.5, 0.0}, {0.25, 0.25}, 1.0, 1.0);
  const auto mc = replication_variances(10000, 2000, 106);
  MESSAGE("n=1e4 replication variances " << mc[0] << " " << mc[1] << " " << mc[2] << " vs " << v[0] << " " << v[4]
                                         << " " << v[8]);
  CHECK(close_rel(mc[0], v[0], 0.10));
  CHECK(close_rel(mc[1], v[4], 0.10));
  CHECK(close_rel(mc[2], v[8], 0.10));
}

TEST_CASE("MC: delta-method covariance at a larger n") {
  const Mat3 v = delta_cov(1.5, kP, {0.5, 0.0}, {0.25, 0.25}, 1.0, 1.0);
  const auto mc = replication_variances(40000, 1000, 109);
  CHECK(close_rel(mc[0], v[0], 0.10));
  CHECK(close_rel(mc[1], v[4], 0.10));
  CHECK(close_rel(mc[2], v[8], 0.10));
}

TEST_CASE("MC: Table 3 and Table 4 designs at moderate replication counts") {
  const int reps = 200;
  const std::size_t n = 5000;
  std::vector<double> ph, bh, th;
  for (int r = 0; r < reps; ++r) {
    const auto s = sprime_iid(1.5, kP, n, derive_seed({107, static_cast<std::uint64_t>(r)}));
    const auto e = sign_bipower_estimate(s, 0.25);
    ph.push_back(e.p_hat);
    bh.push_back(e.beta_hat);
    const auto tv = sample_timevarying(cosine_path(), {1.5, kP}, n, derive_seed({108, static_cast<std::uint64_t>(r)}));
    th.push_back(tripower_estimate(tv, 0.25).scale_hat);
  }
  const auto mp = moments(ph), mb = moments(bh), mt = moments(th);
  CHECK(std::fabs(mp.mean - 0.5984) < 4.0 * std::sqrt(mp.var / reps));
  CHECK(close_rel(std::sqrt(mp.var), 0.0073, 0.25));
  CHECK(std::fabs(mb.mean - 1.4983) < 4.0 * std::sqrt(mb.var / reps));
  CHECK(close_rel(std::sqrt(mb.var), 0.0364, 0.25));
  CHECK(std::fabs(mt.mean - 0.6151) < 4.0 * std::sqrt(mt.var / reps));
}

TEST_CASE("skewed estimator errors") {
  CHECK(levy::test::error_code_of([] { sign_bipower_estimate(make({1, 2}, 1.0)); }) == ErrorCode::EmptySample);
  CHECK(levy::test::error_code_of([] { sign_bipower_estimate(make({1, 2, 3, 4}, 1.0), 0.7); }) ==
        ErrorCode::DomainError);
  CHECK(levy::test::error_code_of([] { tripower_integrated_scale(make({1, 2, 3}, 1.0), 0.5, 0.9); }) ==
        ErrorCode::DomainError);
}
