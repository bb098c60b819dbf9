#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holoflow/disc.hpp"
#include "holoflow/generators.hpp"

namespace holoflow {

inline constexpr double kMinFlowTol = 1e-13;
inline constexpr double kMaxFlowTol = 1e-3;
// Stages with |z| at or beyond this radius force step halving.
inline constexpr double kDiscMargin = 1e-14;

struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> points;
  std::vector<double> step_errors;
  long accepted = 0;
  long rejected = 0;
  long halvings = 0;
  double max_local_error = 0.0;
  bool truncated = false;
  std::string truncation_reason;

  cplx final_point() const { return points.back(); }
};

// Integrates dz/dt = G(z) from z0 over [0, T]. With `output_times` empty every
// accepted step is recorded; otherwise exactly the requested times are.
Trajectory integrate_flow(const GeneratorSpec& gen, DiscPoint z0, double T, double tol = 1e-10,
                          const std::vector<double>& output_times = {});

// phi_T(z0) alone.
cplx flow_point(const GeneratorSpec& gen, cplx z0, double T, double tol = 1e-10);

struct VariationalState {
  cplx phi;
  cplx dphi;
  bool truncated = false;
};

// Joint system phi' = G(phi), (dphi)' = G'(phi) dphi with dphi(0) = 1.
VariationalState variational_flow(const GeneratorSpec& gen, DiscPoint z0, double T, double tol = 1e-10);

// Thresholds for the circle flow.
inline constexpr double kTangencyEntry = 1e-8;
inline constexpr double kTangencyExit = 1e-6;
inline constexpr double kZeroThreshold = 1e-8;
inline constexpr double kPoleThreshold = 1e8;

enum class BoundaryStop { time_exhausted, zero_of_G, pole_of_G, tangency_lost, step_underflow };
std::string to_string(BoundaryStop s);

struct BoundaryFlowResult {
  std::vector<double> times;
  std::vector<double> thetas;  // unwrapped angles, thetas[0] = theta0
  BoundaryStop stop = BoundaryStop::time_exhausted;
  double final_theta = 0.0;  // canonical
  bool monotone = true;
};

// Tangential part Re{conj(x) G(x)} and G itself at x = e^{i theta}.
struct CircleSample {
  double tangency;
  double velocity;  // Im{conj(x) G(x)}
  double abs_G;
};
CircleSample circle_sample(const GeneratorSpec& gen, double theta);

// Integrates theta' = Im{e^{-i theta} G(e^{i theta})} until T or an arc end.
BoundaryFlowResult boundary_flow(const GeneratorSpec& gen, double theta0, double T, double tol = 1e-10);

struct DwEstimate {
  cplx value{0.0, 0.0};
  bool converged = false;
  std::string method;  // "stabilized", "extrapolated" or "inconclusive"
  std::vector<cplx> seed_limits;
  double seed_spread = 0.0;
  std::optional<double> distance_to_tau;
};

DwEstimate dw_estimate(const GeneratorSpec& gen, double T = 80.0);

// |phi_{t+s}(z) - phi_t(phi_s(z))| with inner tolerance tol/10.
double semigroup_residual(const GeneratorSpec& gen, DiscPoint z, double t, double s, double tol = 1e-10);

// Columns t,re,im,step_error.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace holoflow
