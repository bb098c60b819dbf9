#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holoflow/blaschke.hpp"
#include "holoflow/disc.hpp"
#include "holoflow/expr.hpp"

namespace holoflow {

// Holomorphic p on the disc with Re p >= 0, evaluated together with p'.
class HerglotzSpec {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Jet jet(cplx z) const = 0;
    virtual std::string describe() const = 0;
  };

  static HerglotzSpec constant(cplx c);
  static HerglotzSpec expression(expr::Ast p);
  // (1 + B) / (1 - B)
  static HerglotzSpec blaschke_mobius(BlaschkeHyperbolic b);
  // factor * base(inner(z))^exponent, principal branch; inner defaults to z
  static HerglotzSpec power(HerglotzSpec base, double exponent, std::optional<expr::Ast> inner = std::nullopt,
                            cplx factor = 1.0);
  static HerglotzSpec product(std::vector<HerglotzSpec> factors, cplx factor = 1.0);
  // g(z) / ((z - tau)(conj(tau) z - 1)); the removable point z = tau is
  // handled by a circle mean.
  static HerglotzSpec quotient(expr::Ast g, cplx tau);

  Jet jet(cplx z) const { return impl_->jet(z); }
  cplx operator()(cplx z) const { return impl_->jet(z).f; }
  std::string describe() const { return impl_->describe(); }

 private:
  explicit HerglotzSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct ValidationReport {
  bool valid = true;
  double min_re = 0.0;
  cplx worst_point{0.0, 0.0};
  int points = 0;
};

inline constexpr double kHerglotzTol = 1e-9;

// Minimum of Re p over z = 0 plus a polar grid of n_radii radii (accumulating
// towards the circle) times n_angles angles.
ValidationReport herglotz_validate(const HerglotzSpec& p, int n_radii, int n_angles, double tol = kHerglotzTol);
ValidationReport herglotz_validate(const HerglotzSpec& p, int grid_density);

class InvalidGenerator : public DomainError {
 public:
  InvalidGenerator(const std::string& what, ValidationReport r) : DomainError(what), report(r) {}
  ValidationReport report;
};

struct GeneratorSpec {
  std::string name;
  std::optional<cplx> tau;
  std::optional<HerglotzSpec> p;
  std::optional<expr::Ast> direct_G;
  std::optional<expr::Ast> direct_G_prime;

  // G and G'
  Jet jet(cplx z) const;
  cplx G(cplx z) const { return jet(z).f; }
  cplx G_prime(cplx z) const { return jet(z).df; }
  bool interior_dw() const { return tau && std::abs(*tau) < 1.0; }
};

// Berkson-Porta assembly G = (z - tau)(conj(tau) z - 1) p; p is validated.
GeneratorSpec make_generator(cplx tau, HerglotzSpec p, std::string name = "");
// Direct expression for G; G' is derived symbolically.
GeneratorSpec make_generator(expr::Ast g, std::optional<cplx> tau = std::nullopt, std::string name = "");
// Both routes; they must agree to 1e-9 on a 64-point interior grid.
GeneratorSpec make_generator(cplx tau, HerglotzSpec p, expr::Ast g, std::string name = "");

cplx berkson_porta_eval(const GeneratorSpec& gen, DiscPoint z);

using GalleryParams = std::map<std::string, double>;

GeneratorSpec gallery(const std::string& name, const GalleryParams& params = {});
std::vector<std::string> gallery_names();

// Every registry entry with default parameters plus the sector family at
// alpha = -0.5; handy for property sweeps.
std::vector<GeneratorSpec> gallery_all();

}  // namespace holoflow
