#include "holoflow/koenigs.hpp"

#include <cmath>
#include <mutex>

#include "holoflow/flow.hpp"

namespace holoflow {

std::string to_string(DwCase c) { return c == DwCase::interior ? "interior" : "boundary"; }

std::string to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::finite: return "finite";
    case BoundaryTag::infinite: return "infinite";
    default: return "inconclusive";
  }
}

KoenigsEvaluator::KoenigsEvaluator(GeneratorSpec gen, QuadOptions quad)
    : gen_(std::move(gen)), quad_(quad), cache_(std::make_shared<Cache>()) {
  if (gen_.tau) {
    tau_ = *gen_.tau;
  } else {
    DwEstimate est = dw_estimate(gen_);
    if (!est.converged) throw NumericalError("Denjoy-Wolff point could not be located for '" + gen_.name + "'");
    tau_ = est.value;
  }
  if (std::abs(tau_) < 1.0 - 1e-9) {
    case_ = DwCase::interior;
    multiplier_ = gen_.G_prime(tau_);
    if (!(std::abs(multiplier_) > 0.0)) throw NumericalError("G'(tau) vanishes; interior Koenigs function undefined");
    if (tau_ != cplx(0.0, 0.0)) base_integral_ = integral(tau_, 0.0);
  } else {
    case_ = DwCase::boundary;
    tau_ = std::polar(1.0, std::arg(tau_));
  }
}

cplx KoenigsEvaluator::integrand(cplx w) const {
  if (case_ == DwCase::boundary) return 1.0 / gen_.G(w);
  // The integrand extends holomorphically to w = tau, but the two terms cancel
  // there; near tau use the mean over a small circle instead.
  double rho = std::min(1e-2, 0.25 * (1.0 - std::abs(tau_)));
  if (std::abs(w - tau_) < 0.5 * rho) {
    constexpr int kNodes = 16;
    cplx acc = 0.0;
    for (int k = 0; k < kNodes; ++k) {
      cplx v = w + std::polar(rho, kTwoPi * (k + 0.5) / kNodes);
      acc += multiplier_ / gen_.G(v) - 1.0 / (v - tau_);
    }
    return acc / double(kNodes);
  }
  return multiplier_ / gen_.G(w) - 1.0 / (w - tau_);
}

cplx KoenigsEvaluator::integral(cplx a, cplx b) const {
  return integrate_segment([this](cplx w) { return integrand(w); }, a, b, quad_).value;
}

cplx KoenigsEvaluator::from_integral(cplx z, cplx I) const {
  if (case_ == DwCase::boundary) return I;
  return (z - tau_) * std::exp(I);
}

cplx KoenigsEvaluator::h(cplx z) const {
  DiscPoint checked(z);
  if (case_ == DwCase::boundary) return integral(0.0, z);
  if (z == tau_) return 0.0;
  return from_integral(z, integral(tau_, z));
}

cplx KoenigsEvaluator::h_prime(cplx z) const {
  DiscPoint checked(z);
  cplx g = gen_.G(z);
  if (case_ == DwCase::boundary) return 1.0 / g;
  if (z == tau_) return 1.0;
  return multiplier_ * h(z) / g;
}

cplx KoenigsEvaluator::ray_integral(double theta, int j) const {
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->rays.find(theta);
    if (it != cache_->rays.end() && static_cast<int>(it->second.size()) > j) return it->second[j];
  }
  std::unique_lock lock(cache_->mutex);
  auto& nodes = cache_->rays[theta];
  if (nodes.empty()) nodes.push_back(base_integral_);  // radius 0
  cplx x = unit_at(theta);
  while (static_cast<int>(nodes.size()) <= j) {
    int k = static_cast<int>(nodes.size());
    double r0 = k == 1 ? 0.0 : 1.0 - std::ldexp(1.0, -(k - 1));
    double r1 = 1.0 - std::ldexp(1.0, -k);
    nodes.push_back(nodes.back() + integral(r0 * x, r1 * x));
  }
  return nodes[j];
}

cplx KoenigsEvaluator::h_on_ray(double theta, double gap) const {
  if (!(gap > 0.0 && gap <= 1.0)) throw DomainError("ray gap must lie in (0, 1]");
  if (gap < std::ldexp(1.0, -RadialSchedule::kFloorExponent)) throw DomainError("ray gap below the 2^-53 floor");
  cplx x = unit_at(theta);
  cplx z = (1.0 - gap) * x;
  if (case_ == DwCase::interior && z == tau_) return 0.0;
  // deepest cached node with 2^{-j} >= gap
  int j = std::max(0, static_cast<int>(std::floor(-std::log2(gap))));
  while (j > 0 && std::ldexp(1.0, -j) < gap) --j;
  cplx I = ray_integral(theta, j);
  double rj = j == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -j);
  if (1.0 - gap > rj) I += integral(rj * x, z);
  return from_integral(z, I);
}

double KoenigsEvaluator::abel_residual(DiscPoint z, double t, double flow_tol) const {
  if (!(t >= 0.0)) throw DomainError("Abel residual needs t >= 0");
  if (t == 0.0) return 0.0;
  cplx w = flow_point(gen_, z.value(), t, flow_tol);
  cplx hz = h(z.value()), hw = h(w);
  if (case_ == DwCase::boundary) return std::abs(hw - hz - t);
  return std::abs(hw - std::exp(multiplier_ * t) * hz);
}

BoundaryValue KoenigsEvaluator::boundary_value(BoundaryPoint x, const RadialSchedule& sched) const {
  BoundaryValue bv;
  for (std::size_t i = 0; i < sched.size(); ++i) bv.samples.push_back(h_on_ray(x.theta(), sched.gap(i)));
  bv.diagnostics = extrapolate_limit(bv.samples);
  const auto& s = bv.samples;
  std::size_t n = s.size();
  bool increasing = n >= 3 && std::abs(s[n - 1]) > std::abs(s[n - 2]) && std::abs(s[n - 2]) > std::abs(s[n - 3]);
  if (bv.diagnostics.status == LimitStatus::diverged || (std::abs(s.back()) > kInfinityThreshold && increasing)) {
    bv.tag = BoundaryTag::infinite;
    bv.value = s.back();
  } else if (bv.diagnostics.status == LimitStatus::converged) {
    bv.tag = BoundaryTag::finite;
    bv.value = bv.diagnostics.value;
  } else {
    bv.tag = BoundaryTag::inconclusive;
    bv.value = s.back();
  }
  return bv;
}

KoenigsEvaluator KoenigsEvaluator::clone() const {
  KoenigsEvaluator out = *this;
  out.cache_ = std::make_shared<Cache>();
  std::shared_lock lock(cache_->mutex);
  out.cache_->rays = cache_->rays;
  return out;
}

cplx koenigs_boundary_case(const GeneratorSpec& gen, DiscPoint z) {
  KoenigsEvaluator k(gen);
  if (k.dw_case() != DwCase::boundary) throw DomainError("generator '" + gen.name + "' has an interior Denjoy-Wolff point");
  return k.h(z.value());
}

cplx koenigs_interior_case(const GeneratorSpec& gen, DiscPoint z) {
  KoenigsEvaluator k(gen);
  if (k.dw_case() != DwCase::interior) throw DomainError("generator '" + gen.name + "' has a boundary Denjoy-Wolff point");
  return k.h(z.value());
}

double abel_residual(const GeneratorSpec& gen, DiscPoint z, double t) { return KoenigsEvaluator(gen).abel_residual(z, t); }

BoundaryValue boundary_value(const GeneratorSpec& gen, BoundaryPoint x, const RadialSchedule& sched) {
  return KoenigsEvaluator(gen).boundary_value(x, sched);
}

}  // namespace holoflow
