#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "holoflow/disc.hpp"
#include "holoflow/extrapolate.hpp"
#include "holoflow/generators.hpp"
#include "holoflow/quadrature.hpp"

namespace holoflow {

enum class DwCase { interior, boundary };
std::string to_string(DwCase c);

enum class BoundaryTag { finite, infinite, inconclusive };
std::string to_string(BoundaryTag t);

struct BoundaryValue {
  BoundaryTag tag = BoundaryTag::inconclusive;
  cplx value{0.0, 0.0};
  LimitEstimate diagnostics;
  std::vector<cplx> samples;
};

inline constexpr double kInfinityThreshold = 1e8;

// Koenigs function of the semigroup generated by `gen`.
//   boundary case: h(z) = int_0^z dw / G(w), so h' G = 1 and h(0) = 0
//   interior case: h(z) = (z - tau) exp(int_tau^z [G'(tau)/G(w) - 1/(w - tau)] dw)
// Values along rays toward the circle are cached at the dyadic radii 1 - 2^{-j};
// the cache only grows and is shared by concurrent readers.
class KoenigsEvaluator {
 public:
  explicit KoenigsEvaluator(GeneratorSpec gen, QuadOptions quad = {});

  DwCase dw_case() const { return case_; }
  cplx tau() const { return tau_; }
  // G'(tau); only meaningful in the interior case
  cplx multiplier() const { return multiplier_; }
  const GeneratorSpec& generator() const { return gen_; }

  cplx h(cplx z) const;
  cplx h_prime(cplx z) const;
  // h((1 - gap) e^{i theta}) through the ray cache.
  cplx h_on_ray(double theta, double gap) const;

  // |h(phi_t z) - h(z) - t| or |h(phi_t z) - e^{G'(tau) t} h(z)|
  double abel_residual(DiscPoint z, double t, double flow_tol = 1e-12) const;

  BoundaryValue boundary_value(BoundaryPoint x, const RadialSchedule& sched) const;

  // Independent copy with its own cache, for lock-free parallel sweeps.
  KoenigsEvaluator clone() const;

 private:
  struct Cache {
    mutable std::shared_mutex mutex;
    std::map<double, std::vector<cplx>> rays;  // theta -> integral at radius 1 - 2^{-j}
  };

  cplx integrand(cplx w) const;
  cplx integral(cplx a, cplx b) const;
  cplx from_integral(cplx z, cplx I) const;
  cplx ray_integral(double theta, int j) const;

  GeneratorSpec gen_;
  QuadOptions quad_;
  DwCase case_;
  cplx tau_;
  cplx multiplier_{0.0, 0.0};
  cplx base_integral_{0.0, 0.0};  // interior case: int_tau^0
  std::shared_ptr<Cache> cache_;
};

cplx koenigs_boundary_case(const GeneratorSpec& gen, DiscPoint z);
cplx koenigs_interior_case(const GeneratorSpec& gen, DiscPoint z);
double abel_residual(const GeneratorSpec& gen, DiscPoint z, double t);
BoundaryValue boundary_value(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched);

}  // namespace holoflow
