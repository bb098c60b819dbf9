#include "holoflow/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holoflow/flow.hpp"
#include "holoflow/koenigs.hpp"
#include "holoflow/quadrature.hpp"

namespace holoflow {

namespace {

constexpr double kFlowTol = 1e-13;
// Flows started closer to the circle than 2^-30 stall: the ulp spacing near x
// swamps the local error estimate.
constexpr int kFlowCapExponent = 30;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Evaluates f at every gap in parallel; a failed evaluation cuts the sequence there.
std::vector<cplx> sample_gaps(const std::function<cplx(double)>& f, const RadialSchedule& sched, bool& truncated,
                              ExecPolicy policy = default_policy()) {
  const std::size_t n = sched.size();
  std::vector<cplx> out(n);
  std::vector<char> ok(n, 0);
  parallel_for(
      n,
      [&](std::size_t i) {
        try {
          cplx v = f(sched.gap(i));
          ok[i] = finite(v) && v != cplx(0.0, 0.0);
          out[i] = v;
        } catch (const NumericalError&) {
          ok[i] = 0;
        }
      },
      policy);
  std::size_t m = 0;
  while (m < n && ok[m]) ++m;
  truncated = m < n;
  out.resize(m);
  return out;
}

std::vector<double> log_gaps(const RadialSchedule& sched, std::size_t m) {
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = std::log(sched.gap(i));
  return x;
}

double relative_error(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

RadialProbeResult radial_probe(const std::function<cplx(cplx)>& f, BoundaryPoint x, const RadialSchedule& sched,
                               double rel_tol, ExecPolicy policy) {
  RadialProbeResult res;
  cplx xv = x.value();
  res.samples = sample_gaps([&](double g) { return f((1.0 - g) * xv); }, sched, res.truncated, policy);
  const std::size_t m = res.samples.size();
  for (std::size_t i = 0; i < m; ++i) {
    res.radii.push_back(sched.radius(i));
    res.gaps.push_back(sched.gap(i));
  }
  std::vector<double> lx = log_gaps(sched, m), ly(m);
  for (std::size_t i = 0; i < m; ++i) ly[i] = std::log(std::abs(res.samples[i]));
  res.slopes = windowed_slopes(lx, ly, kSlopeWindow);
  res.limit = extrapolate_limit(res.samples, rel_tol);
  return res;
}

bool is_dw_point(const GeneratorSpec& gen, BoundaryPoint x) {
  cplx tau;
  if (gen.tau) {
    tau = *gen.tau;
  } else {
    DwEstimate est = dw_estimate(gen);
    if (!est.converged) return false;
    tau = est.value;
  }
  return std::abs(tau - x.value()) < 1e-9;
}

OrderEstimate order_estimate(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched) {
  OrderEstimate oe;
  if (is_dw_point(gen, x)) {
    oe.dw_point = true;
    return oe;
  }
  RadialProbeResult pr = radial_probe([&](cplx z) { return gen.G(z); }, x, sched);
  oe.truncated = pr.truncated;
  oe.slopes = pr.slopes;
  if (pr.slopes.empty()) throw NumericalError("too few finite samples of G for a slope window");
  // windows lying in the final half of the schedule
  std::size_t first = std::min(pr.slopes.size() - 1, (pr.samples.size() + 1) / 2);
  auto tail = std::span<const double>(pr.slopes).subspan(first);
  oe.alpha_plus = *std::max_element(tail.begin(), tail.end());
  oe.alpha_minus = *std::min_element(tail.begin(), tail.end());
  oe.single = oe.alpha_plus - oe.alpha_minus <= kSingleOrderTol;
  if (oe.single) {
    std::vector<cplx> seq(tail.begin(), tail.end());
    LimitEstimate le = extrapolate_limit(seq, 1e-6);
    oe.alpha = le.status == LimitStatus::converged ? le.value.real() : 0.5 * (oe.alpha_plus + oe.alpha_minus);
  }
  return oe;
}

namespace {

RegularResult judge_ratio(std::vector<cplx> samples, bool truncated) {
  RegularResult rr;
  if (samples.size() < 5) {
    rr.reason = truncated ? "samples truncated before a limit could be judged" : "schedule too short";
    return rr;
  }
  rr.diagnostics = extrapolate_limit(samples, 1e-4);
  const auto& d = rr.diagnostics;
  std::ostringstream os;
  if (d.status == LimitStatus::converged) {
    double peak = 0.0;
    for (cplx v : samples) peak = std::max(peak, std::abs(v));
    if (std::abs(d.value) <= 1e-6 * peak) {
      rr.reason = "ratio tends to 0; the order exceeds alpha";
      return rr;
    }
    rr.regular = true;
    rr.M = d.value;
    return rr;
  }
  if (d.status == LimitStatus::diverged)
    os << "ratio diverges; modulus drift " << d.modulus_drift << " per decade";
  else if (d.phase_drift > kPhaseDriftLimit)
    os << "ratio rotates; phase drift " << d.phase_drift << " rad per decade";
  else
    os << "ratio does not settle; Cauchy difference " << d.error;
  rr.reason = os.str();
  return rr;
}

}  // namespace

RegularResult regular_singularity(const GeneratorSpec& gen, BoundaryPoint x, double alpha, const RadialSchedule& sched) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw DomainError("order alpha must lie in [-1, 1]");
  cplx xv = x.value();
  bool truncated = false;
  auto s = sample_gaps([&](double g) { return gen.G((1.0 - g) * xv) / std::pow(g, alpha); }, sched, truncated);
  return judge_ratio(std::move(s), truncated);
}

RegularResult regular_singularity_on_ray(const GeneratorSpec& gen, const StolzRay& ray, double alpha,
                                         const RadialSchedule& sched) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw DomainError("order alpha must lie in [-1, 1]");
  stolz_points(ray, sched);  // rejects rays that leave the disc
  cplx rot = std::polar(1.0, ray.psi);
  bool truncated = false;
  auto s = sample_gaps([&](double g) { return gen.G(ray.at_gap(g)) / std::pow(g * rot, alpha); }, sched, truncated);
  return judge_ratio(std::move(s), truncated);
}

NontangentialReport nontangential_check(const GeneratorSpec& gen, BoundaryPoint x, double alpha,
                                        const RadialSchedule& sched, std::vector<double> psi_list) {
  if (psi_list.empty()) psi_list = {kPi / 4, -kPi / 4, kPi / 3, -kPi / 3};
  NontangentialReport rep;
  rep.radial = regular_singularity(gen, x, alpha, sched);
  bool all = rep.radial.regular;
  for (double psi : psi_list) {
    RayCheck rc;
    rc.psi = psi;
    try {
      RegularResult r = regular_singularity_on_ray(gen, StolzRay(x, psi), alpha, sched);
      rc.regular = r.regular;
      rc.M = r.M;
      if (r.regular && rep.radial.regular) rc.relative_deviation = relative_error(r.M, rep.radial.M);
    } catch (const DomainError&) {
      rc.rejected = true;
    }
    if (!rc.rejected && (!rc.regular || rc.relative_deviation > 1e-2)) all = false;
    rep.rays.push_back(rc);
  }
  rep.consistent = all;
  if (!rep.radial.regular)
    rep.reason = "no radial limit: " + rep.radial.reason;
  else if (!all)
    rep.reason = "ray limits disagree with the radial limit";
  return rep;
}

PoleMass pole_mass(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched) {
  PoleMass pm;
  cplx xv = x.value();
  bool truncated = false;
  auto s = sample_gaps([&](double g) { return cplx(std::abs(gen.G((1.0 - g) * xv)) * g, 0.0); }, sched, truncated);
  if (s.size() < 3) throw NumericalError("pole mass: too few finite samples");
  pm.diagnostics = extrapolate_limit(s, 1e-4);
  pm.converged = pm.diagnostics.status == LimitStatus::converged;
  pm.divergent = pm.diagnostics.status == LimitStatus::diverged;
  double peak = 0.0;
  for (cplx v : s) peak = std::max(peak, std::abs(v));
  pm.C = std::abs(pm.diagnostics.value);
  if (pm.C <= 1e-6 * peak) pm.C = 0.0;
  return pm;
}

DilationResult dilation(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched) {
  DilationResult dr;
  cplx xv = x.value();
  bool truncated = false;
  auto s = sample_gaps([&](double g) { return gen.G((1.0 - g) * xv) / (-g * xv); }, sched, truncated);
  if (s.size() < 3) throw NumericalError("dilation: too few finite samples");
  dr.diagnostics = extrapolate_limit(s, 1e-4);
  if (dr.diagnostics.status == LimitStatus::converged) {
    cplx l = dr.diagnostics.value;
    dr.nonreal = std::abs(l.imag()) > 1e-6;
    dr.null_point = !dr.nonreal;
    dr.ell = l.real();
  }
  return dr;
}

CoefficientResult dilatation_coeff(MapKind kind, const GeneratorSpec& gen, BoundaryPoint x,
                                   const RadialSchedule& sched, double t) {
  CoefficientResult cr;
  cplx xv = x.value();
  std::size_t n = sched.size();
  if (kind == MapKind::phi_t) {
    if (!(t >= 0.0)) throw DomainError("dilatation coefficient needs t >= 0");
    bool truncated = false;
    auto seq = sample_gaps(
        [&](double g) { return cplx((1.0 - std::abs(flow_point(gen, (1.0 - g) * xv, t, kFlowTol))) / g, 0.0); },
        sched.clipped(kFlowCapExponent), truncated);
    if (seq.size() < 3) throw NumericalError("dilatation coefficient: too few completed flows");
    n = seq.size();
    for (cplx v : seq) cr.ratios.push_back(v.real());
  } else {
    cr.ratios.resize(n);
    KoenigsEvaluator k(gen);
    BoundaryValue hx = k.boundary_value(x, sched);
    if (hx.tag != BoundaryTag::finite) {
      cr.finite = false;
      cr.value = std::numeric_limits<double>::infinity();
      return cr;
    }
    for (std::size_t i = 0; i < n; ++i) cr.ratios[i] = std::abs(hx.samples[i] - hx.value) / sched.gap(i);
  }
  std::vector<cplx> seq(cr.ratios.begin(), cr.ratios.end());
  cr.diagnostics = extrapolate_limit(seq, 1e-4);
  cr.finite = cr.diagnostics.status != LimitStatus::diverged;
  if (cr.finite) {
    cr.value = *std::min_element(cr.ratios.begin() + n / 2, cr.ratios.end());
  } else {
    cr.value = std::numeric_limits<double>::infinity();
  }
  return cr;
}

BetaPointResult beta_point_test(const GeneratorSpec& gen, double t, BoundaryPoint x, const RadialSchedule& sched) {
  if (!(t > 0.0)) throw DomainError("beta-point test needs t > 0");
  BetaPointResult br;
  cplx xv = x.value();
  RadialSchedule fs = sched.clipped(kFlowCapExponent);
  bool truncated = false;
  auto seq = sample_gaps(
      [&](double g) {
        VariationalState vs = variational_flow(gen, DiscPoint((1.0 - g) * xv), t, kFlowTol);
        if (vs.truncated) throw NumericalError("variational flow truncated near the boundary");
        return cplx(std::abs(vs.dphi) / g, 0.0);
      },
      fs, truncated);
  if (seq.size() < 3) throw NumericalError("beta-point test: too few completed flows");
  const std::size_t n = seq.size();
  for (cplx v : seq) br.ratios.push_back(v.real());
  br.diagnostics = extrapolate_limit(seq, 1e-4);
  br.beta_point = br.diagnostics.status == LimitStatus::converged;
  br.limsup = br.beta_point ? *std::max_element(br.ratios.begin() + n / 2, br.ratios.end())
                            : std::numeric_limits<double>::infinity();
  br.pole = pole_mass(gen, x, sched);
  bool pole = br.pole.converged && br.pole.C > 0.0;
  br.agrees_with_pole = pole == br.beta_point;
  return br;
}

Thm11Report thm11_crosscheck(const GeneratorSpec& gen, BoundaryPoint x, double alpha, const std::vector<double>& t_values,
                             const RadialSchedule& sched) {
  if (!(alpha >= -1.0 && alpha < 1.0) || alpha == 0.0) throw DomainError("alpha must lie in [-1, 1) without 0");
  if (alpha > 0.0 && t_values.size() < 2) throw DomainError("alpha > 0 needs at least two times");
  if (t_values.empty()) throw DomainError("at least one time is required");
  Thm11Report rep;
  rep.M = regular_singularity(gen, x, alpha, sched);
  cplx xv = x.value();
  const std::size_t n = sched.size();

  RadialSchedule fs = sched.clipped(kFlowCapExponent);
  for (double t : t_values) {
    if (!(t > 0.0)) throw DomainError("times must be positive");
    TimeLimit tl;
    tl.t = t;
    const std::size_t nf = fs.size();
    std::vector<cplx> Ls(nf), phis(nf);
    std::vector<char> ok(nf, 1);
    parallel_for(nf, [&](std::size_t i) {
      double g = fs.gap(i);
      VariationalState vs = variational_flow(gen, DiscPoint((1.0 - g) * xv), t, kFlowTol);
      ok[i] = !vs.truncated;
      Ls[i] = vs.dphi * std::pow(g, alpha);
      phis[i] = vs.phi;
    });
    std::size_t m = 0;
    while (m < nf && ok[m]) ++m;
    Ls.resize(m);
    phis.resize(m);
    if (m >= 3) {
      tl.L = extrapolate_limit(Ls, 1e-4);
      tl.phi_x = extrapolate_limit(phis, 1e-6).value;
      tl.finite = tl.L.status == LimitStatus::converged;
    }
    rep.L.push_back(tl);
  }

  KoenigsEvaluator k(gen);
  {
    bool truncated = false;
    auto s = sample_gaps([&](double g) { return k.h_prime((1.0 - g) * xv) * std::pow(g, alpha); }, sched, truncated);
    if (s.size() >= 3) {
      LimitEstimate le = extrapolate_limit(s, 1e-4);
      if (le.status == LimitStatus::converged) rep.H_prime = le.value;
    }
  }
  BoundaryValue hx = k.boundary_value(x, sched);
  if (hx.tag == BoundaryTag::finite) {
    std::vector<cplx> s(n);
    std::size_t m = n;
    if (k.dw_case() == DwCase::boundary) {
      // h(rx) - h(x) = -int_{rx}^{x} dw / G(w); subtracting the two values
      // cancels to zero once |h(rx) - h(x)| drops below an ulp of h(x).
      // Points at gap u carry relative error ~1e-16/u, so the path stops at
      // gap g/256 and the rest is e / ((1 - alpha) G), exact for 1/G
      // proportional to gap^{-alpha}.
      QuadOptions q;
      q.rel_tol = 1e-6;
      std::vector<char> ok(n, 1);
      parallel_for(n, [&](std::size_t i) {
        double g = sched.gap(i);
        if (g < std::ldexp(1.0, -kTailFloorExponent)) {
          ok[i] = 0;
          return;
        }
        try {
          double e = g / 256.0;
          cplx end = (1.0 - e) * xv;
          cplx rest = xv * e / ((1.0 - alpha) * gen.G(end));
          cplx d = -integrate_segment([&](cplx w) { return 1.0 / gen.G(w); }, (1.0 - g) * xv, end, q).value - rest;
          s[i] = d * std::pow(g, alpha - 1.0);
        } catch (const NumericalError&) {
          ok[i] = 0;
        }
      });
      m = 0;
      while (m < n && ok[m]) ++m;
      s.resize(m);
    } else {
      for (std::size_t i = 0; i < n; ++i) s[i] = (hx.samples[i] - hx.value) * std::pow(sched.gap(i), alpha - 1.0);
    }
    if (m >= 3) {
      LimitEstimate le = extrapolate_limit(s, 1e-4);
      if (le.status == LimitStatus::converged) rep.H = le.value;
    }
  }

  auto add = [&](std::string name, bool available, cplx got, cplx want) {
    CrossCheck c;
    c.name = std::move(name);
    c.available = available;
    if (available) {
      c.relative_error = relative_error(got, want);
      c.passed = c.relative_error < kCrossCheckTol;
    } else {
      rep.partial = true;
    }
    rep.checks.push_back(c);
  };
  for (const auto& tl : rep.L) {
    std::ostringstream name;
    name << "L(t)M = G(phi_t(x)) at t=" << tl.t;
    bool avail = rep.M.regular && tl.finite;
    cplx want = avail ? gen.G(tl.phi_x) : 0.0;
    add(name.str(), avail, avail ? tl.L.value * rep.M.M : 0.0, want);
  }
  add("H'M = 1", rep.M.regular && rep.H_prime.has_value(), rep.H_prime ? *rep.H_prime * rep.M.M : 0.0, 1.0);
  add("H'/H = 1 - alpha", rep.H_prime && rep.H, (rep.H_prime && rep.H) ? *rep.H_prime / *rep.H : 0.0, 1.0 - alpha);
  return rep;
}

std::string to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::regular_pole: return "regular-pole";
    case SingularityClass::regular_null: return "regular-null";
    case SingularityClass::regular_fractional: return "regular-fractional";
    case SingularityClass::dw_point: return "dw-point";
    default: return "non-regular";
  }
}

SingularityReport classify(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched,
                           std::optional<double> alpha, const std::vector<double>& t_values) {
  SingularityReport rep;
  rep.point = x;
  OrderEstimate oe = order_estimate(gen, x, sched);
  if (oe.dw_point) {
    rep.classification = SingularityClass::dw_point;
    rep.diagnostics.push_back("x is the Denjoy-Wolff point; orders there live in [1,3] and are not classified");
    return rep;
  }
  rep.alpha_plus = oe.alpha_plus;
  rep.alpha_minus = oe.alpha_minus;
  rep.within_order_bounds = oe.alpha_minus >= -1.0 - kOrderSlack && oe.alpha_plus <= 1.0 + kOrderSlack;
  if (!rep.within_order_bounds) rep.diagnostics.push_back("order estimates leave [-1, 1]");
  if (oe.truncated) rep.diagnostics.push_back("schedule truncated at a non-finite or zero sample");
  if (!alpha) alpha = oe.alpha;
  if (!alpha) {
    rep.classification = SingularityClass::non_regular;
    rep.diagnostics.push_back("alpha_plus and alpha_minus differ; no single order");
    return rep;
  }
  double a = std::clamp(*alpha, -1.0, 1.0);
  if (std::abs(a + 1.0) <= kOrderSlack) a = -1.0;
  if (std::abs(a - 1.0) <= kOrderSlack) a = 1.0;
  rep.alpha = a;

  PoleMass pm = pole_mass(gen, x, sched);
  rep.pole_mass = pm.C;
  if (a == -1.0) {
    RegularResult rr = regular_singularity(gen, x, -1.0, sched);
    if (pm.converged && pm.C > 0.0 && rr.regular) {
      rep.classification = SingularityClass::regular_pole;
      rep.M = rr.M;
    } else {
      rep.classification = SingularityClass::non_regular;
      rep.diagnostics.push_back(rr.reason);
    }
  } else if (a == 1.0) {
    DilationResult dr = dilation(gen, x, sched);
    if (dr.null_point) {
      rep.classification = SingularityClass::regular_null;
      rep.dilation = dr.ell;
      rep.M = dr.diagnostics.value * -x.value();
    } else {
      rep.classification = SingularityClass::non_regular;
      rep.diagnostics.push_back(dr.nonreal ? "limit G(rx)/(rx - x) is not real" : "G(rx)/(rx - x) has no finite limit");
    }
  } else {
    RegularResult rr = regular_singularity(gen, x, a, sched);
    if (rr.regular) {
      rep.classification = SingularityClass::regular_fractional;
      rep.M = rr.M;
    } else {
      rep.classification = SingularityClass::non_regular;
      rep.diagnostics.push_back(rr.reason);
    }
  }
  if (rep.classification == SingularityClass::regular_fractional && a != 0.0 && !t_values.empty() &&
      (a < 0.0 || t_values.size() >= 2)) {
    try {
      rep.crosscheck = thm11_crosscheck(gen, x, a, t_values, sched);
    } catch (const NumericalError& e) {
      rep.diagnostics.push_back(std::string("cross-check failed: ") + e.what());
    }
  }
  return rep;
}

}  // namespace holoflow
