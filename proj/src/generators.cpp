#include "holoflow/generators.hpp"

#include <cmath>
#include <sstream>

namespace holoflow {

namespace {

class ConstantImpl : public HerglotzSpec::Impl {
 public:
  explicit ConstantImpl(cplx c) : c_(c) {}
  Jet jet(cplx) const override { return {c_, 0.0}; }
  std::string describe() const override { return "constant " + expr::complex_text(c_); }

 private:
  cplx c_;
};

class ExprImpl : public HerglotzSpec::Impl {
 public:
  explicit ExprImpl(expr::Ast p) : p_(p), dp_(expr::differentiate(p)) {}
  Jet jet(cplx z) const override { return {expr::eval(p_, z), expr::eval(dp_, z)}; }
  std::string describe() const override { return "expr " + expr::to_string(p_); }

 private:
  expr::Ast p_, dp_;
};

class MobiusBlaschkeImpl : public HerglotzSpec::Impl {
 public:
  explicit MobiusBlaschkeImpl(BlaschkeHyperbolic b) : b_(std::move(b)) {}
  Jet jet(cplx z) const override {
    Jet bj = b_.eval(z);
    cplx den = 1.0 - bj.f;
    if (den == cplx(0.0, 0.0)) throw NumericalError("Blaschke product equals 1 inside the disc");
    return {(1.0 + bj.f) / den, 2.0 * bj.df / (den * den)};
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "mobius-blaschke N=" << b_.size();
    return os.str();
  }

 private:
  BlaschkeHyperbolic b_;
};

class PowerImpl : public HerglotzSpec::Impl {
 public:
  PowerImpl(HerglotzSpec base, double e, std::optional<expr::Ast> inner, cplx factor)
      : base_(std::move(base)), e_(e), inner_(inner), factor_(factor) {
    if (inner_) dinner_ = expr::differentiate(*inner_);
  }
  Jet jet(cplx z) const override {
    cplx w = z, dw = 1.0;
    if (inner_) {
      w = expr::eval(*inner_, z);
      dw = expr::eval(*dinner_, z);
    }
    Jet b = base_.jet(w);
    if (b.f == cplx(0.0, 0.0)) throw NumericalError("power composition base vanishes");
    cplx v = factor_ * std::exp(e_ * std::log(b.f));
    return {v, v * e_ * b.df / b.f * dw};
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "power(" << base_.describe() << ")^" << expr::number_text(e_);
    if (inner_) os << " o " << expr::to_string(*inner_);
    return os.str();
  }

 private:
  HerglotzSpec base_;
  double e_;
  std::optional<expr::Ast> inner_;
  std::optional<expr::Ast> dinner_;
  cplx factor_;
};

class ProductImpl : public HerglotzSpec::Impl {
 public:
  ProductImpl(std::vector<HerglotzSpec> fs, cplx factor) : fs_(std::move(fs)), factor_(factor) {}
  Jet jet(cplx z) const override {
    const std::size_t n = fs_.size();
    std::vector<Jet> js;
    js.reserve(n);
    for (const auto& f : fs_) js.push_back(f.jet(z));
    std::vector<cplx> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * js[k].f;
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * js[k].f;
    cplx d = 0.0;
    for (std::size_t k = 0; k < n; ++k) d += prefix[k] * js[k].df * suffix[k + 1];
    return {factor_ * prefix[n], factor_ * d};
  }
  std::string describe() const override {
    std::string s = "product[";
    for (std::size_t k = 0; k < fs_.size(); ++k) s += (k ? "; " : "") + fs_[k].describe();
    return s + "]";
  }

 private:
  std::vector<HerglotzSpec> fs_;
  cplx factor_;
};

class QuotientImpl : public HerglotzSpec::Impl {
 public:
  QuotientImpl(expr::Ast g, cplx tau) : g_(g), dg_(expr::differentiate(g)), tau_(tau) {}

  Jet jet(cplx z) const override {
    double dist = std::abs(z - tau_);
    double room = 1.0 - std::abs(tau_);
    if (dist < 1e-3 && room > 1e-2) {
      // mean value over a small circle around z; exact for holomorphic functions
      constexpr int kNodes = 16;
      double rho = std::min(1e-2, 0.25 * room);
      Jet acc{0.0, 0.0};
      for (int k = 0; k < kNodes; ++k) {
        Jet j = direct(z + std::polar(rho, kTwoPi * k / kNodes));
        acc.f += j.f;
        acc.df += j.df;
      }
      return {acc.f / double(kNodes), acc.df / double(kNodes)};
    }
    return direct(z);
  }
  std::string describe() const override {
    return "quotient " + expr::to_string(g_) + " / ((z-tau)(conj(tau)z-1)), tau=" + expr::complex_text(tau_);
  }

 private:
  Jet direct(cplx z) const {
    cplx q = (z - tau_) * (std::conj(tau_) * z - 1.0);
    cplx dq = 2.0 * std::conj(tau_) * z - 1.0 - std::norm(tau_);
    cplx g = expr::eval(g_, z), dg = expr::eval(dg_, z);
    return {g / q, (dg * q - g * dq) / (q * q)};
  }
  expr::Ast g_, dg_;
  cplx tau_;
};

}  // namespace

HerglotzSpec HerglotzSpec::constant(cplx c) { return HerglotzSpec(std::make_shared<ConstantImpl>(c)); }
HerglotzSpec HerglotzSpec::expression(expr::Ast p) { return HerglotzSpec(std::make_shared<ExprImpl>(std::move(p))); }
HerglotzSpec HerglotzSpec::blaschke_mobius(BlaschkeHyperbolic b) {
  return HerglotzSpec(std::make_shared<MobiusBlaschkeImpl>(std::move(b)));
}
HerglotzSpec HerglotzSpec::power(HerglotzSpec base, double exponent, std::optional<expr::Ast> inner, cplx factor) {
  return HerglotzSpec(std::make_shared<PowerImpl>(std::move(base), exponent, std::move(inner), factor));
}
HerglotzSpec HerglotzSpec::product(std::vector<HerglotzSpec> factors, cplx factor) {
  if (factors.empty()) throw DomainError("product of Herglotz factors needs at least one factor");
  return HerglotzSpec(std::make_shared<ProductImpl>(std::move(factors), factor));
}
HerglotzSpec HerglotzSpec::quotient(expr::Ast g, cplx tau) {
  return HerglotzSpec(std::make_shared<QuotientImpl>(std::move(g), tau));
}

ValidationReport herglotz_validate(const HerglotzSpec& p, int n_radii, int n_angles, double tol) {
  if (n_radii < 1 || n_angles < 1) throw DomainError("validation grid must be non-empty");
  ValidationReport rep;
  auto visit = [&](cplx z) {
    cplx v;
    try {
      v = p(z);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "Herglotz evaluation failed at z=" << z << ": " << e.what();
      throw NumericalError(os.str());
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "Herglotz evaluation is not finite at z=" << z;
      throw NumericalError(os.str());
    }
    if (rep.points == 0 || v.real() < rep.min_re) {
      rep.min_re = v.real();
      rep.worst_point = z;
    }
    ++rep.points;
  };
  visit(0.0);
  for (int i = 0; i < n_radii; ++i) {
    double r = 1.0 - std::pow(10.0, -6.0 * (i + 1) / n_radii);
    for (int j = 0; j < n_angles; ++j) visit(std::polar(r, kTwoPi * j / n_angles));
  }
  rep.valid = rep.min_re >= -tol;
  return rep;
}

ValidationReport herglotz_validate(const HerglotzSpec& p, int grid_density) {
  return herglotz_validate(p, grid_density, 2 * grid_density);
}

Jet GeneratorSpec::jet(cplx z) const {
  if (p && tau) {
    cplx t = *tau;
    cplx q = (z - t) * (std::conj(t) * z - 1.0);
    cplx dq = 2.0 * std::conj(t) * z - 1.0 - std::norm(t);
    Jet pj = p->jet(z);
    return {q * pj.f, dq * pj.f + q * pj.df};
  }
  if (direct_G) {
    cplx g = expr::eval(*direct_G, z);
    cplx dg = expr::eval(*direct_G_prime, z);
    return {g, dg};
  }
  throw DomainError("generator has neither (tau, p) nor a direct expression");
}

namespace {
void check_tau(cplx tau) {
  if (!(std::abs(tau) <= 1.0 + 1e-12)) throw DomainError("Denjoy-Wolff point must satisfy |tau| <= 1");
}
}  // namespace

GeneratorSpec make_generator(cplx tau, HerglotzSpec p, std::string name) {
  check_tau(tau);
  ValidationReport rep = herglotz_validate(p, 32, 64);
  if (!rep.valid) {
    std::ostringstream os;
    os << "Herglotz part of '" << name << "' has Re p = " << rep.min_re << " at z = " << rep.worst_point;
    throw InvalidGenerator(os.str(), rep);
  }
  GeneratorSpec g;
  g.name = std::move(name);
  g.tau = tau;
  g.p = std::move(p);
  return g;
}

GeneratorSpec make_generator(expr::Ast g_ast, std::optional<cplx> tau, std::string name) {
  if (tau) check_tau(*tau);
  GeneratorSpec g;
  g.name = std::move(name);
  g.tau = tau;
  g.direct_G_prime = expr::differentiate(g_ast);
  g.direct_G = std::move(g_ast);
  return g;
}

GeneratorSpec make_generator(cplx tau, HerglotzSpec p, expr::Ast g_ast, std::string name) {
  GeneratorSpec g = make_generator(tau, std::move(p), name);
  g.direct_G_prime = expr::differentiate(g_ast);
  g.direct_G = std::move(g_ast);
  for (int i = 1; i <= 4; ++i) {
    for (int j = 0; j < 16; ++j) {
      cplx z = std::polar(0.2 * i, kTwoPi * (j + 0.5) / 16);
      cplx a = g.G(z);
      cplx b = expr::eval(*g.direct_G, z);
      if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
        std::ostringstream os;
        os << "(tau, p) and direct G of '" << name << "' disagree at z = " << z << ": " << a << " vs " << b;
        throw DomainError(os.str());
      }
    }
  }
  return g;
}

cplx berkson_porta_eval(const GeneratorSpec& gen, DiscPoint z) { return gen.G(z.value()); }

}  // namespace holoflow
