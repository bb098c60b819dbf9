#include "holoflow/disc.hpp"

#include <cmath>
#include <sstream>

namespace holoflow {

DiscPoint::DiscPoint(cplx value) : value_(value) {
  if (!(std::abs(value) < 1.0))
    throw DomainError("point " + std::to_string(value.real()) + "+" + std::to_string(value.imag()) +
                      "i is not inside the unit disc");
}

BoundaryPoint BoundaryPoint::from_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("boundary angle must be finite");
  double t = canonical_angle(theta);
  return BoundaryPoint(t, unit_at(t));
}

cplx unit_at(double theta) {
  double t = canonical_angle(theta);
  // quadrant angles land exactly on 1, i, -1, -i
  if (t == 0.0) return {1.0, 0.0};
  if (t == kPi / 2) return {0.0, 1.0};
  if (t == kPi) return {-1.0, 0.0};
  if (t == 3 * kPi / 2) return {0.0, -1.0};
  return std::polar(1.0, t);
}

BoundaryPoint BoundaryPoint::from_value(cplx v) {
  double m = std::abs(v);
  if (!(std::abs(m - 1.0) < 1e-9)) throw DomainError("boundary point must have modulus 1");
  return from_angle(std::arg(v));
}

double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angle_difference(double a, double b) {
  double d = std::remainder(b - a, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

ArcInterval::ArcInterval(double start_, double length_) : start(canonical_angle(start_)), length(length_) {
  if (!(length_ > 0.0 && length_ < kTwoPi)) throw DomainError("arc length must lie in (0, 2pi)");
}

bool ArcInterval::contains(double theta) const {
  double off = canonical_angle(theta - start);
  return off > 0.0 && off < length;
}

RadialSchedule::RadialSchedule(int k_min, int k_max, double scale) : k_min_(k_min), k_max_(k_max), scale_(scale) {
  if (!(scale > 0.0 && scale <= 1.0)) throw DomainError("schedule scale must lie in (0,1]");
  if (k_min < 0 || k_max < k_min) throw DomainError("schedule needs 0 <= k_min <= k_max");
  if (std::ldexp(scale, -k_max) < std::ldexp(1.0, -kFloorExponent))
    throw DomainError("schedule k_max passes the 2^-" + std::to_string(kFloorExponent) + " floor");
  for (int k = k_min; k <= k_max; ++k) {
    double r = 1.0 - std::ldexp(scale, -k);
    if (!(r > 0.0)) throw DomainError("schedule radius r_k must be positive (raise k_min)");
    if (!radii_.empty() && !(r > radii_.back()))
      throw DomainError("schedule radii are not strictly increasing in double precision");
    radii_.push_back(r);
    gaps_.push_back(1.0 - r);
  }
}

RadialSchedule RadialSchedule::clipped(int k_cap) const {
  if (k_cap < k_min_) throw DomainError("schedule cap lies below k_min");
  return RadialSchedule(k_min_, std::min(k_max_, k_cap), scale_);
}

RadialSchedule RadialSchedule::parse(const std::string& text) {
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':'))
    throw DomainError("schedule must look like kmin:kmax[:scale]");
  std::getline(in, c);
  try {
    return RadialSchedule(std::stoi(a), std::stoi(b), c.empty() ? 1.0 : std::stod(c));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError("schedule must look like kmin:kmax[:scale]");
  }
}

StolzRay::StolzRay(BoundaryPoint anchor_, double psi_) : anchor(anchor_), psi(psi_) {
  if (!(std::abs(psi_) < kPi / 2)) throw DomainError("Stolz angle must lie in (-pi/2, pi/2)");
}

cplx StolzRay::at_gap(double gap) const { return anchor.value() * (1.0 - gap * std::polar(1.0, psi)); }

cplx cayley(cplx z) {
  if (z == cplx(1.0, 0.0)) throw DomainError("cayley map has a pole at z = 1");
  return (1.0 + z) / (1.0 - z);
}

double hyperbolic_distance(DiscPoint z, DiscPoint w) {
  cplx a = z.value(), b = w.value();
  double rho = std::abs((a - b) / (1.0 - std::conj(b) * a));
  return std::atanh(std::min(rho, 1.0));
}

std::vector<DiscPoint> stolz_points(const StolzRay& ray, const RadialSchedule& sched) {
  std::vector<DiscPoint> out;
  out.reserve(sched.size());
  for (std::size_t i = 0; i < sched.size(); ++i) {
    cplx z = ray.at_gap(sched.gap(i));
    if (!(std::abs(z) < 1.0))
      throw DomainError("Stolz ray with psi=" + std::to_string(ray.psi) + " leaves the disc at k=" +
                        std::to_string(sched.k(i)));
    out.emplace_back(z);
  }
  return out;
}

}  // namespace holoflow
