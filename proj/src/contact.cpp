#include "holoflow/contact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holoflow/flow.hpp"
#include "holoflow/koenigs.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {

constexpr double kArcSettleFraction = 1e-2;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Radial probes at an approximate endpoint stop well before the angular error matters.
RadialSchedule endpoint_schedule(double tol) {
  int k_max = static_cast<int>(std::floor(std::log2(1.0 / (16.0 * tol))));
  return RadialSchedule(4, std::max(k_max, 8));
}

double signed_velocity(const GeneratorSpec& gen, double theta, const RadialSchedule& sched) {
  cplx s = unit_at(theta);
  double last = 0.0;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    try {
      cplx v = std::conj(s) * gen.G((1.0 - sched.gap(i)) * s);
      if (!finite(v)) break;
      last = v.imag();
    } catch (const NumericalError&) {
      break;
    }
  }
  return last;
}

std::optional<cplx> dw_point(const GeneratorSpec& gen) {
  if (gen.tau) return *gen.tau;
  DwEstimate est = dw_estimate(gen);
  if (est.converged) return est.value;
  return std::nullopt;
}

}  // namespace

RadialSchedule default_tangency_schedule() { return RadialSchedule(4, 40); }

TangencyReport radial_tangency(const GeneratorSpec& gen, double theta, const RadialSchedule& sched) {
  TangencyReport rep;
  rep.theta = theta;
  cplx s = unit_at(theta);
  std::vector<cplx> re;
  std::vector<double> im;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    cplx v;
    try {
      v = std::conj(s) * gen.G((1.0 - sched.gap(i)) * s);
    } catch (const NumericalError&) {
      break;
    }
    if (!finite(v)) break;
    re.emplace_back(v.real(), 0.0);
    im.push_back(v.imag());
  }
  if (re.size() < 5) return rep;
  LimitEstimate le = extrapolate_limit(re, 1e-6);
  for (std::size_t i = im.size() / 2; i < im.size(); ++i) rep.im_magnitude = std::max(rep.im_magnitude, std::abs(im[i]));
  // Re samples of size O(gap) with a tiny prefactor never meet a relative
  // tolerance; they have settled once the extrapolants agree far below the threshold.
  rep.status = le.status;
  if (le.status != LimitStatus::diverged && le.error <= kArcSettleFraction * kArcTangencyTol * std::max(1.0, rep.im_magnitude))
    rep.status = LimitStatus::converged;
  rep.re_limit = le.value.real();
  rep.contact = rep.status == LimitStatus::converged &&
                std::abs(rep.re_limit) < kArcTangencyTol * std::max(1.0, rep.im_magnitude) &&
                rep.im_magnitude > kArcMinAbsG;
  return rep;
}

std::string to_string(InitialClass c) {
  switch (c) {
    case InitialClass::fixed_point: return "fixed-point";
    case InitialClass::contact_point: return "contact-point";
    default: return "unknown";
  }
}

std::string to_string(FinalClass c) {
  switch (c) {
    case FinalClass::dw_point: return "dw-point";
    case FinalClass::absorbed: return "absorbed-into-disc";
    default: return "unknown";
  }
}

EndpointValue endpoint_value(const GeneratorSpec& gen, double theta) {
  EndpointValue ev;
  RadialSchedule sched = endpoint_schedule(kArcEndpointTol);
  cplx s = unit_at(theta);
  std::vector<cplx> g;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    cplx v;
    try {
      v = gen.G((1.0 - sched.gap(i)) * s);
    } catch (const NumericalError&) {
      break;
    }
    if (!finite(v)) {
      ev.infinite = true;
      return ev;
    }
    g.push_back(v);
  }
  if (g.size() < 3) return ev;
  LimitEstimate le = extrapolate_limit(g, 1e-4);
  std::size_t n = g.size();
  bool growing = std::abs(g[n - 1]) > std::abs(g[n - 2]);
  if (le.status == LimitStatus::diverged || (std::abs(g[n - 1]) > kArcInfinity && growing)) {
    ev.infinite = true;
    ev.value = g.back();
    return ev;
  }
  ev.converged = le.status == LimitStatus::converged || le.error <= 0.1 * kArcEndpointTol;
  ev.value = le.value;
  return ev;
}

void endpoint_classify(const GeneratorSpec& gen, ContactArcReport& arc) {
  if (arc.full_circle) return;
  arc.G_x0 = endpoint_value(gen, arc.theta0);
  arc.G_x1 = endpoint_value(gen, arc.theta1);

  try {
    KoenigsEvaluator k(gen);
    BoundaryValue hv = k.boundary_value(arc.x0, endpoint_schedule(kArcEndpointTol));
    if (hv.tag == BoundaryTag::infinite)
      arc.x0_class = InitialClass::fixed_point;
    else if (hv.tag == BoundaryTag::finite)
      arc.x0_class = InitialClass::contact_point;
    else
      arc.notes.push_back("Koenigs boundary value at x0 inconclusive");
  } catch (const NumericalError& e) {
    arc.notes.push_back(std::string("Koenigs boundary value at x0 failed: ") + e.what());
  }
  if (arc.x0_class == InitialClass::fixed_point && !(arc.G_x0.converged && std::abs(arc.G_x0.value) < 1e-6))
    arc.notes.push_back("x0 is a boundary fixed point but G(x0) does not vanish");
  if (arc.G_x0.infinite) arc.notes.push_back("G(x0) is not finite");

  if (arc.G_x1.infinite) {
    arc.x1_class = FinalClass::absorbed;
  } else if (arc.G_x1.converged) {
    arc.x1_class = std::abs(arc.G_x1.value) < 1e-6 ? FinalClass::dw_point : FinalClass::absorbed;
  } else {
    arc.notes.push_back("G(x1) inconclusive");
  }
  if (arc.x1_class == FinalClass::dw_point) {
    auto tau = dw_point(gen);
    if (tau && std::abs(*tau - arc.x1.value()) > 1e-4) arc.notes.push_back("G(x1) = 0 but x1 is not the Denjoy-Wolff point");
  }
}

LifeTime life_time(const GeneratorSpec& gen, const ContactArcReport& arc, double theta_start, double T_max) {
  if (arc.full_circle) throw DomainError("the whole circle is a contact arc; it has no endpoints");
  if (!(T_max > 0.0)) throw DomainError("T_max must be positive");
  const double from_start = canonical_angle(theta_start - arc.interval.start);
  if (!(from_start > kArcEndpointTol && from_start < arc.interval.length - kArcEndpointTol))
    throw DomainError("theta_start must lie strictly inside the arc");

  LifeTime lt;
  lt.theta_start = theta_start;
  BoundaryFlowResult bf = boundary_flow(gen, theta_start, T_max);
  const double dir = arc.orientation;
  const double span = dir > 0 ? arc.interval.length - from_start : from_start;
  const double travelled = dir * (bf.thetas.back() - theta_start);
  const double remaining = span - travelled;
  lt.final_theta = bf.final_theta;
  if (!bf.monotone) throw CorruptArc("boundary orbit reversed direction inside the arc");

  auto tau = dw_point(gen);
  bool ends_at_tau = tau && std::abs(*tau - arc.x1.value()) < 1e-4;
  if (std::abs(remaining) <= kArcEndpointTol && !ends_at_tau) {
    lt.finite = true;
    lt.t1 = bf.times.back();
    return lt;
  }
  if (ends_at_tau && (bf.stop == BoundaryStop::time_exhausted || bf.stop == BoundaryStop::zero_of_G) &&
      remaining < span) {
    lt.finite = false;
    return lt;
  }
  std::ostringstream os;
  os << "boundary flow stopped (" << to_string(bf.stop) << ") " << remaining << " rad before the arc end";
  if (bf.stop == BoundaryStop::time_exhausted) throw NumericalError(os.str() + "; raise T_max");
  throw CorruptArc(os.str());
}

std::vector<ContactArcReport> detect_arcs(const GeneratorSpec& gen, const ArcScanOptions& opts) {
  if (opts.resolution < kArcMinResolution) throw DomainError("arc scan resolution must be at least 256");
  if (!(opts.endpoint_tol > 0.0)) throw DomainError("endpoint tolerance must be positive");
  const int N = opts.resolution;
  const double h = kTwoPi / N;
  const RadialSchedule sched = default_tangency_schedule();
  auto is_contact = [&](double theta) { return radial_tangency(gen, theta, sched).contact; };

  std::vector<char> pos(N);
  parallel_for(N, [&](std::size_t j) { pos[j] = is_contact(j * h); });

  std::vector<ContactArcReport> arcs;
  if (std::none_of(pos.begin(), pos.end(), [](char c) { return c; })) return arcs;
  if (std::all_of(pos.begin(), pos.end(), [](char c) { return c; })) {
    ContactArcReport r;
    r.full_circle = true;
    r.orientation = signed_velocity(gen, 0.0, sched) > 0 ? 1 : -1;
    r.notes.push_back("every scanned angle satisfies the contact condition");
    arcs.push_back(r);
    return arcs;
  }

  // boundary between a contact and a non-contact angle, by bisection
  auto refine = [&](double inside, double outside) {
    while (std::abs(outside - inside) > opts.endpoint_tol) {
      double mid = 0.5 * (inside + outside);
      (is_contact(mid) ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };

  int first_neg = 0;
  while (pos[first_neg]) ++first_neg;
  for (int step = 0; step < N;) {
    int j = (first_neg + step) % N;
    if (!pos[j]) {
      ++step;
      continue;
    }
    int run = 0;
    while (pos[(j + run) % N]) ++run;
    step += run;
    double a_in = j * h, b_in = (j + run - 1) * h;  // unwrapped, b_in >= a_in
    double start = refine(a_in, a_in - h);
    double end = refine(b_in, b_in + h);

    ContactArcReport r;
    r.interval = ArcInterval(start, end - start);
    double vel = signed_velocity(gen, r.interval.midpoint(), sched);
    r.orientation = vel > 0 ? 1 : -1;
    r.theta0 = canonical_angle(r.orientation > 0 ? start : end);
    r.theta1 = canonical_angle(r.orientation > 0 ? end : start);
    r.x0 = BoundaryPoint::from_angle(r.theta0);
    r.x1 = BoundaryPoint::from_angle(r.theta1);
    if (run == 1) r.notes.push_back("arc spans a single scan angle");
    arcs.push_back(r);
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const ContactArcReport& a, const ContactArcReport& b) { return a.interval.start < b.interval.start; });

  for (auto& r : arcs) {
    if (opts.classify_endpoints) endpoint_classify(gen, r);
    if (opts.life_times) {
      for (double s : {0.25, 0.5, 0.75}) {
        try {
          r.life_times.push_back(life_time(gen, r, r.interval.at(s), opts.life_time_T));
        } catch (const NumericalError& e) {
          r.notes.push_back(std::string("life-time: ") + e.what());
        }
      }
    }
  }
  return arcs;
}

HerglotzMassReport herglotz_mass(const HerglotzSpec& p, ArcInterval arc, const std::vector<double>& radii) {
  if (radii.empty()) throw DomainError("at least one radius is required");
  HerglotzMassReport rep;
  rep.interval = arc;
  rep.radii = radii;
  rep.masses.resize(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double r = radii[i];
    if (!(r > 0.0 && r < 1.0)) throw DomainError("radii must lie in (0,1)");
    if (i > 0 && !(r > radii[i - 1])) throw DomainError("radii must increase");
  }
  parallel_for(radii.size(), [&](std::size_t i) {
    double r = radii[i];
    long n = std::clamp<long>(static_cast<long>(std::ceil(32.0 * arc.length / (1.0 - r))), 8192, 1L << 22);
    double step = arc.length / n, sum = 0.0;
    for (long k = 0; k <= n; ++k) {
      double w = (k == 0 || k == n) ? 0.5 : 1.0;
      sum += w * p(r * unit_at(arc.start + k * step)).real();
    }
    rep.masses[i] = sum * step / kTwoPi;
  });
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.masses.size(); ++i)
    if (!(rep.masses[i] < rep.masses[i - 1])) rep.decreasing = false;
  return rep;
}

HerglotzMassReport herglotz_mass(const GeneratorSpec& gen, ArcInterval arc, const std::vector<double>& radii) {
  if (!gen.p) throw DomainError("unsupported: the generator carries no Herglotz function p");
  return herglotz_mass(*gen.p, arc, radii);
}

}  // namespace holoflow
