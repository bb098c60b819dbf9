#include "holoflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace holoflow {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double s0, s1;
  cplx value;
  double error;
  double fmin, fmax;
};

Piece kronrod(const std::function<cplx(cplx)>& f, cplx a, cplx d, double s0, double s1, long& evals) {
  double c = 0.5 * (s0 + s1), hl = 0.5 * (s1 - s0);
  cplx fc = f(a + c * d);
  cplx rk = fc * kWgk[7], rg = fc * kWg[3];
  double fmin = std::abs(fc), fmax = fmin;
  for (int j = 0; j < 7; ++j) {
    cplx f1 = f(a + (c - hl * kXgk[j]) * d);
    cplx f2 = f(a + (c + hl * kXgk[j]) * d);
    rk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
    fmin = std::min({fmin, std::abs(f1), std::abs(f2)});
    fmax = std::max({fmax, std::abs(f1), std::abs(f2)});
  }
  evals += 15;
  for (cplx v : {rk, rg})
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("integrand is not finite on the path");
  return {s0, s1, rk * hl * d, std::abs((rk - rg) * hl * d), fmin, fmax};
}

}  // namespace

QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, const QuadOptions& opts) {
  QuadResult res;
  const cplx d = b - a;
  if (d == cplx(0.0, 0.0)) return res;

  std::vector<double> breaks = {0.0};
  if (opts.grade_to_end) {
    double room = std::max(1.0 - std::abs(b), 1e-300);
    int levels = static_cast<int>(std::ceil(std::log2(std::abs(d) / room)));
    levels = std::clamp(levels, 0, 60);
    for (int j = 1; j <= levels; ++j) breaks.push_back(1.0 - std::ldexp(1.0, -j));
  }
  breaks.push_back(1.0);

  // depth-first so the sum is accumulated in a fixed order
  struct Task {
    double s0, s1;
    int depth;
  };
  std::vector<Task> stack;
  for (std::size_t i = breaks.size() - 1; i-- > 0;) stack.push_back({breaks[i], breaks[i + 1], 0});

  // crude scale for the relative criterion: one rule per initial piece
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) scale += std::abs(kronrod(f, a, d, breaks[i], breaks[i + 1], res.evaluations).value);
  const double abs_floor = 1e-300;

  double worst_err = 0.0, worst_s0 = 0.0, worst_s1 = 0.0;
  bool failed = false;
  while (!stack.empty()) {
    Task t = stack.back();
    stack.pop_back();
    Piece p = kronrod(f, a, d, t.s0, t.s1, res.evaluations);
    double target = std::max(opts.rel_tol * std::max(std::abs(p.value), scale * (t.s1 - t.s0)), abs_floor);
    bool wild = p.fmin > 0 && p.fmax / p.fmin > opts.variation_limit;
    if ((p.error <= target && !wild) || t.depth >= opts.max_depth) {
      if (p.error > target) {
        failed = true;
        if (p.error > worst_err) {
          worst_err = p.error;
          worst_s0 = t.s0;
          worst_s1 = t.s1;
        }
      }
      res.value += p.value;
      res.error += p.error;
      continue;
    }
    double mid = 0.5 * (t.s0 + t.s1);
    stack.push_back({mid, t.s1, t.depth + 1});
    stack.push_back({t.s0, mid, t.depth + 1});
  }
  if (failed && res.error > opts.rel_tol * std::max(std::abs(res.value), scale)) {
    cplx za = a + worst_s0 * d, zb = a + worst_s1 * d;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "quadrature missed relative %.1e at depth %d; worst piece [(%.6g,%.6g), (%.6g,%.6g)] error %.3g",
                  opts.rel_tol, opts.max_depth, za.real(), za.imag(), zb.real(), zb.imag(), worst_err);
    throw NumericalError(buf);
  }
  return res;
}

}  // namespace holoflow
