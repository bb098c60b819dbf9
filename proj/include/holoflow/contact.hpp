#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holoflow/disc.hpp"
#include "holoflow/extrapolate.hpp"
#include "holoflow/generators.hpp"

namespace holoflow {

// Tangency and |G| thresholds for arc membership.
inline constexpr double kArcTangencyTol = 1e-8;
inline constexpr double kArcMinAbsG = 1e-8;
inline constexpr int kArcMinResolution = 256;
inline constexpr int kArcDefaultResolution = 2048;
// Endpoints are bracketed this tightly; life-times accept this distance to the end.
inline constexpr double kArcEndpointTol = 1e-6;
// |G| above this with a growing trend reads as G = infinity.
inline constexpr double kArcInfinity = 1e8;

// The flow left the arc before reaching an endpoint.
class CorruptArc : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

RadialSchedule default_tangency_schedule();

struct TangencyReport {
  double theta = 0.0;
  LimitStatus status = LimitStatus::inconclusive;
  double re_limit = 0.0;
  // max |Im{conj(s) G(r s)}| over the second half of the schedule
  double im_magnitude = 0.0;
  bool contact = false;  // converged, |re| < kArcTangencyTol * max(1, im), im > kArcMinAbsG
};

TangencyReport radial_tangency(const GeneratorSpec& gen, double theta,
                               const RadialSchedule& sched = default_tangency_schedule());

enum class InitialClass { fixed_point, contact_point, unknown };
enum class FinalClass { dw_point, absorbed, unknown };
std::string to_string(InitialClass c);
std::string to_string(FinalClass c);

// Radial limit of G at an endpoint; infinite when |G| blows up.
struct EndpointValue {
  bool infinite = false;
  bool converged = false;
  cplx value{0.0, 0.0};
};

struct LifeTime {
  double theta_start = 0.0;
  bool finite = false;  // false: the orbit tends to the Denjoy-Wolff point
  double t1 = 0.0;      // only for finite
  double final_theta = 0.0;
};

struct ContactArcReport {
  ArcInterval interval;  // counterclockwise
  bool full_circle = false;
  int orientation = 0;   // +1: theta increases along the flow
  double theta0 = 0.0, theta1 = 0.0;  // initial and final endpoint angles
  BoundaryPoint x0 = BoundaryPoint::from_angle(0.0);
  BoundaryPoint x1 = BoundaryPoint::from_angle(0.0);
  InitialClass x0_class = InitialClass::unknown;
  FinalClass x1_class = FinalClass::unknown;
  EndpointValue G_x0, G_x1;
  std::vector<LifeTime> life_times;
  std::vector<std::string> notes;
};

struct ArcScanOptions {
  int resolution = kArcDefaultResolution;
  double endpoint_tol = kArcEndpointTol;
  bool classify_endpoints = true;
  // life-times from the quarter points of each arc
  bool life_times = true;
  double life_time_T = 200.0;
};

std::vector<ContactArcReport> detect_arcs(const GeneratorSpec& gen, const ArcScanOptions& opts = {});

LifeTime life_time(const GeneratorSpec& gen, const ContactArcReport& arc, double theta_start, double T_max);

// Fills x0_class, x1_class, G_x0, G_x1.
void endpoint_classify(const GeneratorSpec& gen, ContactArcReport& arc);

EndpointValue endpoint_value(const GeneratorSpec& gen, double theta);

struct HerglotzMassReport {
  ArcInterval interval;
  std::vector<double> radii;
  std::vector<double> masses;  // (1/2pi) int Re p(r e^{i theta}) d theta over the arc
  bool decreasing = false;
};

HerglotzMassReport herglotz_mass(const GeneratorSpec& gen, ArcInterval arc, const std::vector<double>& radii);
HerglotzMassReport herglotz_mass(const HerglotzSpec& p, ArcInterval arc, const std::vector<double>& radii);

}  // namespace holoflow
