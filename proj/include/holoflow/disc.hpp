#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace holoflow {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bad user input: out-of-range parameters, malformed files, violated preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that ran but could not reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DiscPoint {
 public:
  explicit DiscPoint(cplx value);
  cplx value() const { return value_; }

 private:
  cplx value_;
};

class BoundaryPoint {
 public:
  static BoundaryPoint from_angle(double theta);
  // Projects onto the circle; rejects values far from |v| = 1.
  static BoundaryPoint from_value(cplx v);

  double theta() const { return theta_; }
  cplx value() const { return value_; }

 private:
  BoundaryPoint(double theta, cplx value) : theta_(theta), value_(value) {}
  double theta_;
  cplx value_;
};

// e^{i theta}, exact at multiples of pi/2.
cplx unit_at(double theta);

// Maps any real angle into [0, 2pi).
double canonical_angle(double theta);

// Signed difference b - a reduced to (-pi, pi].
double angle_difference(double a, double b);

// Counterclockwise arc from start through start + length.
struct ArcInterval {
  double start = 0.0;
  double length = 0.0;

  ArcInterval() = default;
  ArcInterval(double start_, double length_);
  double end() const { return canonical_angle(start + length); }
  double midpoint() const { return canonical_angle(start + 0.5 * length); }
  bool contains(double theta) const;
  // Angle at fraction s in [0,1] of the arc.
  double at(double s) const { return canonical_angle(start + s * length); }
};

// Dyadic radii r_k = 1 - scale * 2^{-k}, k = k_min..k_max.
class RadialSchedule {
 public:
  // Smallest admissible gap is 2^{-kFloorExponent}; 1 - r is then still exact.
  static constexpr int kFloorExponent = 53;

  RadialSchedule(int k_min, int k_max, double scale = 1.0);

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  double scale() const { return scale_; }
  std::size_t size() const { return radii_.size(); }
  double radius(std::size_t i) const { return radii_[i]; }
  // 1 - radius(i), computed exactly from the stored radius.
  double gap(std::size_t i) const { return gaps_[i]; }
  int k(std::size_t i) const { return k_min_ + static_cast<int>(i); }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& gaps() const { return gaps_; }

  // Same schedule with k_max lowered to at most k_cap.
  RadialSchedule clipped(int k_cap) const;

  // Parses "kmin:kmax:scale" (scale optional).
  static RadialSchedule parse(const std::string& text);

 private:
  int k_min_;
  int k_max_;
  double scale_;
  std::vector<double> radii_;
  std::vector<double> gaps_;
};

struct StolzRay {
  BoundaryPoint anchor;
  double psi = 0.0;

  StolzRay(BoundaryPoint anchor_, double psi_);
  // anchor * (1 - gap * e^{i psi})
  cplx at_gap(double gap) const;
};

cplx cayley(cplx z);

double hyperbolic_distance(DiscPoint z, DiscPoint w);

std::vector<DiscPoint> stolz_points(const StolzRay& ray, const RadialSchedule& sched);

}  // namespace holoflow
