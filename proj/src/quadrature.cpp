#include "levy/quadrature.hpp"

#include <algorithm>
#include <cfloat>
#include <vector>

namespace levy {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <int K, class F>
void gk15(const F& f, double a, double b, double (&kron)[K], double (&err)[K], double (&resabs)[K]) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double rk[K], rg[K], ra[K], v[K];
  f(c, v);
  for (int i = 0; i < K; ++i) {
    rk[i] = kWgk[7] * v[i];
    rg[i] = kWg[3] * v[i];
    ra[i] = kWgk[7] * std::fabs(v[i]);
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    double v1[K], v2[K];
    f(c - dx, v1);
    f(c + dx, v2);
    for (int i = 0; i < K; ++i) {
      const double s = v1[i] + v2[i];
      rk[i] += kWgk[j] * s;
      ra[i] += kWgk[j] * (std::fabs(v1[i]) + std::fabs(v2[i]));
      if (j % 2 == 1) rg[i] += kWg[j / 2] * s;
    }
  }
  for (int i = 0; i < K; ++i) {
    kron[i] = rk[i] * hw;
    err[i] = std::fabs((rk[i] - rg[i]) * hw);
    resabs[i] = ra[i] * std::fabs(hw);
  }
}

template <int K>
struct Segment {
  double a, b;
  double val[K], err[K], ra[K];
  int depth;
  double key;
};

// Global adaptive bisection: always split the segment with the largest
// error until the summed error meets the tolerance. Segments that cannot be
// split further are kept as they are.
template <int K, class F>
void run(const F& f, double a, double b, double abs_tol, double rel_tol, int max_depth, double (&acc)[K],
         double (&err)[K], bool& ok) {
  for (int i = 0; i < K; ++i) acc[i] = err[i] = 0.0;
  ok = true;
  if (a == b) return;
  constexpr std::size_t kMaxSegments = 20000;
  std::vector<Segment<K>> heap, frozen;
  auto make = [&](double lo, double hi, int depth) {
    Segment<K> s{lo, hi, {}, {}, {}, depth, 0.0};
    gk15<K>(f, lo, hi, s.val, s.err, s.ra);
    for (int i = 0; i < K; ++i) s.key = std::max(s.key, s.err[i]);
    return s;
  };
  auto less = [](const Segment<K>& x, const Segment<K>& y) { return x.key < y.key; };
  heap.push_back(make(a, b, 0));
  double scale = 0.0;
  for (int i = 0; i < K; ++i) scale = std::max(scale, std::fabs(heap[0].val[i]));
  const double tol = std::max(abs_tol, rel_tol * scale);
  double tot_err[K], tot_abs[K];
  for (int i = 0; i < K; ++i) {
    tot_err[i] = heap[0].err[i];
    tot_abs[i] = heap[0].ra[i];
  }
  auto done = [&] {
    bool fine = true;
    for (int i = 0; i < K; ++i) fine = fine && tot_err[i] <= std::max(tol, 50.0 * DBL_EPSILON * tot_abs[i]);
    return fine;
  };
  while (!done() && !heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), less);
    Segment<K> s = heap.back();
    heap.pop_back();
    bool roundoff = true;
    for (int i = 0; i < K; ++i) roundoff = roundoff && s.err[i] <= 50.0 * DBL_EPSILON * s.ra[i];
    const double m = 0.5 * (s.a + s.b);
    if (roundoff || s.depth >= max_depth || !(m > s.a && m < s.b) ||
        heap.size() + frozen.size() + 2 > kMaxSegments) {
      frozen.push_back(s);
      continue;
    }
    Segment<K> l = make(s.a, m, s.depth + 1), r = make(m, s.b, s.depth + 1);
    for (int i = 0; i < K; ++i) {
      tot_err[i] += l.err[i] + r.err[i] - s.err[i];
      tot_abs[i] += l.ra[i] + r.ra[i] - s.ra[i];
    }
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), less);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), less);
  }
  // Sum in left-to-right order so the result does not depend on heap layout.
  frozen.insert(frozen.end(), heap.begin(), heap.end());
  std::sort(frozen.begin(), frozen.end(), [](const Segment<K>& x, const Segment<K>& y) { return x.a < y.a; });
  for (const auto& s : frozen)
    for (int i = 0; i < K; ++i) {
      acc[i] += s.val[i];
      err[i] += s.err[i];
    }
  ok = done();
}

}  // namespace

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        double rel_tol, int max_depth) {
  auto g = [&](double x, double (&out)[1]) { out[0] = f(x); };
  double acc[1], err[1];
  bool ok;
  run<1>(g, a, b, abs_tol, rel_tol, max_depth, acc, err, ok);
  return {acc[0], err[0], ok};
}

QuadResult2 integrate_gk2(const std::function<void(double, double&, double&)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth) {
  auto g = [&](double x, double (&out)[2]) { f(x, out[0], out[1]); };
  double acc[2], err[2];
  bool ok;
  run<2>(g, a, b, abs_tol, rel_tol, max_depth, acc, err, ok);
  return {acc[0], acc[1], err[0], err[1], ok};
}

}  // namespace levy
