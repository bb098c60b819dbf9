#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holoflow/disc.hpp"
#include "holoflow/extrapolate.hpp"
#include "holoflow/generators.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

struct RadialProbeResult {
  std::vector<double> radii;
  std::vector<double> gaps;
  std::vector<cplx> samples;
  std::vector<double> slopes;  // windowed slopes of log|f| against log(1 - r)
  LimitEstimate limit;
  bool truncated = false;  // samples past a non-finite or zero value were dropped
};

inline constexpr std::size_t kSlopeWindow = 5;

// Samples f((1 - g_k) x) for every gap of the schedule.
RadialProbeResult radial_probe(const std::function<cplx(cplx)>& f, BoundaryPoint x, const RadialSchedule& sched,
                               double rel_tol = 1e-4, ExecPolicy policy = default_policy());

// True when x is (within 1e-9) the Denjoy-Wolff point of gen.
bool is_dw_point(const GeneratorSpec& gen, BoundaryPoint x);

struct OrderEstimate {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  bool single = false;          // alpha_plus and alpha_minus agree within 0.02
  std::optional<double> alpha;  // refined common order when single
  bool dw_point = false;
  bool truncated = false;
  std::vector<double> slopes;
};

inline constexpr double kSingleOrderTol = 0.02;

OrderEstimate order_estimate(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched);

struct RegularResult {
  bool regular = false;
  cplx M{0.0, 0.0};
  LimitEstimate diagnostics;
  std::string reason;
};

// Phase drift of the ratio above this (radians per decade of 1 - r) counts as rotation.
inline constexpr double kPhaseDriftLimit = 1e-3;

// Limit of G(z)/(1 - conj(x) z)^alpha along the radius to x.
RegularResult regular_singularity(const GeneratorSpec& gen, BoundaryPoint x, double alpha, const RadialSchedule& sched);
// Same along a Stolz ray at angle psi.
RegularResult regular_singularity_on_ray(const GeneratorSpec& gen, const StolzRay& ray, double alpha,
                                         const RadialSchedule& sched);

struct RayCheck {
  double psi = 0.0;
  bool regular = false;
  cplx M{0.0, 0.0};
  double relative_deviation = 0.0;
  bool rejected = false;  // the ray left the disc
};

struct NontangentialReport {
  RegularResult radial;
  std::vector<RayCheck> rays;
  bool consistent = false;
  std::string reason;
};

NontangentialReport nontangential_check(const GeneratorSpec& gen, BoundaryPoint x, double alpha,
                                        const RadialSchedule& sched, std::vector<double> psi_list = {});

struct PoleMass {
  double C = 0.0;
  bool divergent = false;
  bool converged = false;
  LimitEstimate diagnostics;
};

// lim |G(rx)| (1 - r); a finite nonzero value is the mass of a regular pole.
PoleMass pole_mass(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched);

struct DilationResult {
  bool null_point = false;
  double ell = 0.0;
  bool nonreal = false;  // limit has imaginary part above 1e-6
  LimitEstimate diagnostics;
};

// lim G(rx)/(rx - x); a finite real value is the dilation of a regular null point.
DilationResult dilation(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched);

enum class MapKind { phi_t, koenigs };

struct CoefficientResult {
  bool finite = false;
  double value = 0.0;  // smallest ratio over the schedule when finite
  std::vector<double> ratios;
  LimitEstimate diagnostics;
};

// phi_t: (1 - |phi_t(rx)|)/(1 - r). koenigs: |h(rx) - h(x)|/(1 - r) with h(x)
// from the boundary value on the same schedule.
CoefficientResult dilatation_coeff(MapKind kind, const GeneratorSpec& gen, BoundaryPoint x,
                                   const RadialSchedule& sched, double t = 1.0);

struct BetaPointResult {
  bool beta_point = false;
  double limsup = 0.0;
  std::vector<double> ratios;
  LimitEstimate diagnostics;
  PoleMass pole;
  bool agrees_with_pole = false;
};

// |phi_t'(rx)| / |x - rx| along the schedule, cross-checked against pole_mass.
BetaPointResult beta_point_test(const GeneratorSpec& gen, double t, BoundaryPoint x, const RadialSchedule& sched);

struct CrossCheck {
  std::string name;
  bool available = false;
  double relative_error = 0.0;
  bool passed = false;
};

struct TimeLimit {
  double t = 0.0;
  LimitEstimate L;       // phi_t'(rx)(1 - r)^alpha
  cplx phi_x{0.0, 0.0};  // lim phi_t(rx)
  bool finite = false;
};

struct Thm11Report {
  RegularResult M;
  std::vector<TimeLimit> L;
  std::optional<cplx> H_prime;
  std::optional<cplx> H;
  std::vector<CrossCheck> checks;
  bool partial = false;
};

inline constexpr double kCrossCheckTol = 1e-2;
// Finest gap 2^{-k} used for h(rx) - h(x) in the boundary case.
inline constexpr int kTailFloorExponent = 24;

Thm11Report thm11_crosscheck(const GeneratorSpec& gen, BoundaryPoint x, double alpha, const std::vector<double>& t_values,
                             const RadialSchedule& sched);

enum class SingularityClass { regular_pole, regular_null, regular_fractional, non_regular, dw_point };
std::string to_string(SingularityClass c);

struct SingularityReport {
  BoundaryPoint point = BoundaryPoint::from_angle(0.0);
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  std::optional<double> alpha;
  SingularityClass classification = SingularityClass::non_regular;
  cplx M{0.0, 0.0};
  double pole_mass = 0.0;
  double dilation = 0.0;
  bool within_order_bounds = true;
  std::vector<std::string> diagnostics;
  std::optional<Thm11Report> crosscheck;
};

// Admissible orders: -1 <= alpha_minus <= alpha_plus <= 1, with this slack.
inline constexpr double kOrderSlack = 0.02;

SingularityReport classify(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched,
                           std::optional<double> alpha = std::nullopt, const std::vector<double>& t_values = {});

}  // namespace holoflow
