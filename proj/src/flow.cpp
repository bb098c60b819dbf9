#include "holoflow/flow.hpp"

#include <cmath>
#include <cstdio>

#include "holoflow/dopri5.hpp"

namespace holoflow {

namespace {

void check_tol(double tol) {
  if (!(tol >= kMinFlowTol && tol <= kMaxFlowTol)) throw DomainError("flow tolerance must lie in [1e-13, 1e-3]");
}

// Stages must stay strictly inside; seeds closer than the margin keep half of their own gap.
double admissible_radius(cplx z0) { return 1.0 - std::min(kDiscMargin, 0.5 * (1.0 - std::abs(z0))); }

}  // namespace

Trajectory integrate_flow(const GeneratorSpec& gen, DiscPoint z0, double T, double tol,
                          const std::vector<double>& output_times) {
  check_tol(tol);
  if (!(T >= 0.0)) throw DomainError("flow time T must be non-negative");
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.points.push_back(z0.value());
  tr.step_errors.push_back(0.0);
  if (T == 0.0) return tr;

  const double rmax = admissible_radius(z0.value());
  auto rhs = [&](const CState<1>& y) { return CState<1>{gen.G(y[0])}; };
  auto ok = [&](const CState<1>& y) { return std::abs(y[0]) < rmax; };
  Dopri5Options opts;
  opts.tol = tol;
  Dopri5<1> solver({z0.value()}, 0.0, opts);

  if (output_times.empty()) {
    solver.advance_to(rhs, ok, T, [&](double t, const CState<1>& y, double err) {
      tr.times.push_back(t);
      tr.points.push_back(y[0]);
      tr.step_errors.push_back(err);
    });
  } else {
    double prev = 0.0;
    for (double t : output_times) {
      if (!(t > prev) || t > T) throw DomainError("output times must be increasing, positive and at most T");
      double worst = 0.0;
      bool done = solver.advance_to(rhs, ok, t, [&](double, const CState<1>&, double err) { worst = std::max(worst, err); });
      if (!done) break;
      tr.times.push_back(t);
      tr.points.push_back(solver.y()[0]);
      tr.step_errors.push_back(worst);
      prev = t;
    }
  }
  const auto& st = solver.stats();
  tr.accepted = st.accepted;
  tr.rejected = st.rejected;
  tr.halvings = st.halvings;
  tr.max_local_error = st.max_error;
  tr.truncated = st.truncated;
  tr.truncation_reason = st.reason;
  return tr;
}

cplx flow_point(const GeneratorSpec& gen, cplx z0, double T, double tol) {
  Trajectory tr = integrate_flow(gen, DiscPoint(z0), T, tol, T > 0 ? std::vector<double>{T} : std::vector<double>{});
  if (tr.truncated) throw NumericalError("flow truncated: " + tr.truncation_reason);
  return tr.final_point();
}

VariationalState variational_flow(const GeneratorSpec& gen, DiscPoint z0, double T, double tol) {
  check_tol(tol);
  if (!(T >= 0.0)) throw DomainError("flow time T must be non-negative");
  if (T == 0.0) return {z0.value(), 1.0, false};
  const double rmax = admissible_radius(z0.value());
  auto rhs = [&](const CState<2>& y) {
    Jet j = gen.jet(y[0]);
    return CState<2>{j.f, j.df * y[1]};
  };
  auto ok = [&](const CState<2>& y) { return std::abs(y[0]) < rmax; };
  Dopri5Options opts;
  opts.tol = tol;
  Dopri5<2> solver({z0.value(), cplx(1.0, 0.0)}, 0.0, opts);
  solver.advance_to(rhs, ok, T, [](double, const CState<2>&, double) {});
  VariationalState s{solver.y()[0], solver.y()[1], solver.stats().truncated};
  if (!s.truncated && !(std::abs(s.dphi) > 0.0)) throw NumericalError("variational derivative vanished");
  return s;
}

std::string to_string(BoundaryStop s) {
  switch (s) {
    case BoundaryStop::time_exhausted: return "time-exhausted";
    case BoundaryStop::zero_of_G: return "zero-of-G";
    case BoundaryStop::pole_of_G: return "pole-of-G";
    case BoundaryStop::tangency_lost: return "tangency-lost";
    default: return "step-underflow";
  }
}

CircleSample circle_sample(const GeneratorSpec& gen, double theta) {
  cplx x = unit_at(theta);
  cplx g;
  try {
    g = gen.G(x);
  } catch (const NumericalError&) {
    return {std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity()};
  }
  if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
    return {std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity()};
  cplx v = std::conj(x) * g;
  return {v.real(), v.imag(), std::abs(g)};
}

BoundaryFlowResult boundary_flow(const GeneratorSpec& gen, double theta0, double T, double tol) {
  check_tol(tol);
  CircleSample s0 = circle_sample(gen, theta0);
  if (!(std::abs(s0.tangency) < kTangencyEntry * std::max(1.0, s0.abs_G) && s0.abs_G > kZeroThreshold)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "theta0 = %.17g is not on a contact arc: Re{conj(x)G(x)} = %.6g, |G| = %.6g", theta0,
                  s0.tangency, s0.abs_G);
    throw DomainError(buf);
  }
  BoundaryFlowResult res;
  res.times.push_back(0.0);
  res.thetas.push_back(theta0);
  BoundaryStop last_fail = BoundaryStop::step_underflow;
  auto ok = [&](const CState<1>& y) {
    CircleSample s = circle_sample(gen, y[0].real());
    if (!(s.abs_G < kPoleThreshold)) {
      last_fail = BoundaryStop::pole_of_G;
      return false;
    }
    if (!(s.abs_G > kZeroThreshold)) {
      last_fail = BoundaryStop::zero_of_G;
      return false;
    }
    if (!(std::abs(s.tangency) <= kTangencyExit * std::max(1.0, s.abs_G))) {
      last_fail = BoundaryStop::tangency_lost;
      return false;
    }
    return true;
  };
  auto rhs = [&](const CState<1>& y) { return CState<1>{cplx(circle_sample(gen, y[0].real()).velocity, 0.0)}; };
  Dopri5Options opts;
  opts.tol = tol;
  Dopri5<1> solver({cplx(theta0, 0.0)}, 0.0, opts);
  double dir = s0.velocity > 0 ? 1.0 : -1.0;
  solver.advance_to(rhs, ok, T, [&](double t, const CState<1>& y, double) {
    if ((y[0].real() - res.thetas.back()) * dir < 0.0) res.monotone = false;
    res.times.push_back(t);
    res.thetas.push_back(y[0].real());
  });
  res.stop = solver.stats().truncated ? last_fail : BoundaryStop::time_exhausted;
  res.final_theta = canonical_angle(res.thetas.back());
  return res;
}

DwEstimate dw_estimate(const GeneratorSpec& gen, double T) {
  if (!(T >= 64.0)) throw DomainError("Denjoy-Wolff estimation needs T >= 64");
  const std::vector<double> checkpoints = {1, 2, 4, 8, 16, 32, 64, T};
  DwEstimate est;
  bool all_stable = true, all_extrapolated = true;
  for (int k = 0; k < 8; ++k) {
    cplx seed = std::polar(0.5, kTwoPi * (k + 0.5) / 8);
    std::vector<double> outs = checkpoints;
    if (T == 64.0) outs.pop_back();
    Trajectory tr = integrate_flow(gen, DiscPoint(seed), T, 1e-10, outs);
    const auto& v = tr.points;  // v[0] is the seed
    if (tr.truncated || v.size() < 8) {
      est.method = "inconclusive";
      all_stable = all_extrapolated = false;
      est.seed_limits.push_back(v.back());
      continue;
    }
    std::size_t n = v.size();
    bool stable = std::abs(v[n - 1] - v[n - 2]) < 1e-8 && std::abs(v[n - 2] - v[n - 3]) < 1e-8;
    if (stable) {
      est.seed_limits.push_back(v[n - 1]);
      continue;
    }
    all_stable = false;
    // Aitken on the geometric checkpoints 16, 32, 64
    std::size_t i64 = 7;
    cplx d1 = v[i64 - 1] - v[i64 - 2], d2 = v[i64] - v[i64 - 1];
    cplx q = d2 / d1;
    if (!(std::abs(q) < 0.9)) {
      all_extrapolated = false;
      est.seed_limits.push_back(v[i64]);
      continue;
    }
    est.seed_limits.push_back(v[i64] + d2 * q / (1.0 - q));
  }
  cplx mean = 0.0;
  for (cplx s : est.seed_limits) mean += s;
  mean /= double(est.seed_limits.size());
  for (cplx s : est.seed_limits) est.seed_spread = std::max(est.seed_spread, std::abs(s - mean));
  est.value = mean;
  if (all_stable && est.seed_spread < 1e-8) {
    est.converged = true;
    est.method = "stabilized";
  } else if (all_extrapolated && est.seed_spread < 1e-3) {
    est.converged = true;
    est.method = "extrapolated";
    if (std::abs(std::abs(mean) - 1.0) < 1e-3) est.value = std::polar(1.0, std::arg(mean));
  } else {
    est.method = "inconclusive";
  }
  if (gen.tau) est.distance_to_tau = std::abs(est.value - *gen.tau);
  return est;
}

double semigroup_residual(const GeneratorSpec& gen, DiscPoint z, double t, double s, double tol) {
  if (!(t >= 0.0 && s >= 0.0)) throw DomainError("semigroup residual needs t, s >= 0");
  double inner = tol / 10;
  cplx a = flow_point(gen, z.value(), t + s, inner);
  cplx b = flow_point(gen, flow_point(gen, z.value(), s, inner), t, inner);
  return std::abs(a - b);
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,re,im,step_error\n";
  char buf[128];
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", tr.times[i], tr.points[i].real(), tr.points[i].imag(),
                  tr.step_errors[i]);
    out += buf;
  }
  return out;
}

}  // namespace holoflow
