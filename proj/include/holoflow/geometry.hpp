#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holoflow/domain.hpp"
#include "holoflow/extrapolate.hpp"

namespace holoflow {

class KoenigsEvaluator;

enum class DiniVerdict { dini, not_dini, not_a_corner, inconclusive };
std::string to_string(DiniVerdict v);

struct CornerOptions {
  double rho0 = 0.5;
  int shells = 40;          // rho_j = rho0 2^{-j}, j = 0..shells
  int per_shell = 4;        // extra radii inside each shell for the oscillation
};

struct CornerReport {
  cplx vertex{0.0, 0.0};
  double opening = 0.0;                    // estimate at the smallest radius
  std::vector<double> radii;
  std::vector<double> gamma_minus, gamma_plus;  // arg(side - w0) per radius, unwrapped
  std::vector<double> openings;
  std::vector<double> oscillation;         // osc_j per shell
  SeriesReport proxy;                      // terms (j+1) osc_j ln 2
  double target_opening = 0.0;
  double opening_error = 0.0;
  DiniVerdict verdict = DiniVerdict::inconclusive;
  std::string reason;
};

CornerReport dini_corner(const PlanarDomain& dom, cplx w0, double target_opening, const CornerOptions& opts = {});

struct SideReport {
  std::vector<double> distances;  // strictly decreasing
  SeriesReport sums;              // terms (log(d_n / d_{n+1}))^2
  bool dense = false;
};

struct LocalDensityReport {
  SideReport side[2];
  bool locally_dense = false;
  std::string reason;
};

// Splits E into the two curve sides at w0 by direction and tests each side.
LocalDensityReport locally_dense(const std::vector<cplx>& E, cplx w0);
LocalDensityReport locally_dense(const std::vector<cplx>& side_a, const std::vector<cplx>& side_b, cplx w0);

struct SectorTestReport {
  bool contained = false;
  std::optional<cplx> witness;
  long samples = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240607;

// S = w0 + {nu s e^{i phi}: |phi| < theta/2, 0 < s < rho}
SectorTestReport sector_test(const PlanarDomain& dom, cplx w0, cplx nu, double theta, double rho,
                             std::uint64_t seed = kDefaultSeed, int samples = 4096);

struct BertilssonReport {
  double gamma = 2.0;
  std::vector<double> alphas;
  std::vector<double> partial_sums;
  double tail_exponent = 0.0;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

inline constexpr int kBertilssonSamples = 512;

BertilssonReport bertilsson_alphas(const PlanarDomain& dom, cplx w0, double gamma, int k_max,
                                   std::uint64_t seed = kDefaultSeed);

enum class SubdivisionVerdict { yes, fails_sufficient_condition, inconclusive };
std::string to_string(SubdivisionVerdict v);

struct SubdivisionReport {
  std::vector<double> u;
  std::vector<double> delta, theta1, theta2;
  SeriesReport delta_sums, theta1_sums, theta2_sums;
  SubdivisionVerdict verdict = SubdivisionVerdict::inconclusive;
  std::string note;
};

struct SubdivisionOptions {
  double u0 = 1.0;
  double u_max = 1e6;
  int max_terms = 200000;
};

// Strip-coordinate domain inside {|Im| < 1/2}; cross-sections are read off by
// bisection along vertical lines through the real axis.
SubdivisionReport rw_subdivision(const PlanarDomain& strip_dom, const SubdivisionOptions& opts = {});
// Same construction from a given nonincreasing defect omega(u) with symmetric ends.
SubdivisionReport rw_subdivision(const std::function<double(double)>& omega, const SubdivisionOptions& opts = {});

// i C0 - log(w - w0) / ((1 - alpha) pi), branch cut along the ray from w0 in direction cut_direction.
cplx strip_transform(cplx w, cplx w0, double alpha, double C0, double cut_direction = kPi);

// Under-approximate test that the domain's sample points lie in the convex hull of sampled h values.
struct HullCheckReport {
  long checked = 0;
  long outside_hull = 0;
  std::optional<cplx> witness;
};
HullCheckReport koenigs_image_hull_check(const KoenigsEvaluator& k, const PlanarDomain& omega0, cplx center,
                                         double radius, int grid = 128, std::uint64_t seed = kDefaultSeed);

}  // namespace holoflow
