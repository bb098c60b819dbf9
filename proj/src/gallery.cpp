#include <cmath>
#include <functional>
#include <set>

#include "holoflow/generators.hpp"

namespace holoflow {

namespace {

using expr::number_text;

class Params {
 public:
  Params(const std::string& entry, const GalleryParams& given, std::set<std::string> known)
      : entry_(entry), given_(given) {
    for (const auto& [k, v] : given)
      if (!known.count(k)) throw DomainError("gallery entry '" + entry + "' has no parameter '" + k + "'");
  }
  double get(const std::string& key, double fallback) const {
    auto it = given_.find(key);
    double v = it == given_.end() ? fallback : it->second;
    if (!std::isfinite(v)) throw DomainError("parameter '" + key + "' of '" + entry_ + "' must be finite");
    return v;
  }
  void require(bool ok, const std::string& what) const {
    if (!ok) throw DomainError("gallery entry '" + entry_ + "': " + what);
  }

 private:
  std::string entry_;
  const GalleryParams& given_;
};

const std::string kZeta = "((1+z)/(1-z))";

// Applies the constant unimodular rotation that makes G(anchor) match the
// prescribed value.
GeneratorSpec anchor_branch(GeneratorSpec g, cplx anchor, cplx target) {
  cplx actual = g.G(anchor);
  cplx rot = target / actual;
  if (std::abs(rot - 1.0) < 1e-12) return g;
  if (std::abs(std::abs(rot) - 1.0) > 1e-9) throw DomainError("branch anchor of '" + g.name + "' is not a rotation");
  GeneratorSpec out = make_generator(*g.tau, HerglotzSpec::product({*g.p}, rot), g.name);
  return out;
}

GeneratorSpec sector_family(double alpha, const std::string& name) {
  std::string c = number_text(2.0 * (1.0 - alpha));
  std::string pa = kZeta + "^" + number_text(alpha) + "/" + c;
  return make_generator(1.0, HerglotzSpec::expression(expr::parse(pa)), expr::parse("(1-z)^2*" + pa), name);
}

cplx tau_param(const Params& ps) {
  cplx tau(ps.get("tau_re", 0.0), ps.get("tau_im", 0.0));
  ps.require(std::abs(tau) <= 1.0 && std::abs(tau - 1.0) > 1e-12, "tau must lie in the closed disc minus {1}");
  return tau;
}

int count_param(const Params& ps) {
  double n = ps.get("N", 8.0);
  ps.require(n == std::round(n) && n >= 2 && n <= 12, "N must be an integer in [2, 12]");
  return static_cast<int>(n);
}

using Builder = std::function<GeneratorSpec(const GalleryParams&)>;

const std::map<std::string, Builder>& registry() {
  static const std::map<std::string, Builder> reg = {
      {"parabolic",
       [](const GalleryParams& gp) {
         Params ps("parabolic", gp, {});
         return make_generator(1.0, HerglotzSpec::constant(1.0), expr::parse("(1-z)^2"), "parabolic");
       }},
      {"dilation",
       [](const GalleryParams& gp) {
         Params ps("dilation", gp, {});
         return make_generator(0.0, HerglotzSpec::constant(1.0), expr::parse("-z"), "dilation");
       }},
      {"hyperbolic",
       [](const GalleryParams& gp) {
         Params ps("hyperbolic", gp, {});
         return make_generator(1.0, HerglotzSpec::expression(expr::parse("(1+z)/(2*(1-z))")),
                               expr::parse("(1-z^2)/2"), "hyperbolic");
       }},
      {"sector",
       [](const GalleryParams& gp) {
         Params ps("sector", gp, {"alpha"});
         double a = ps.get("alpha", 0.5);
         ps.require(a > -1.0 && a < 1.0 && a != 0.0, "alpha must lie in (-1,1) without 0");
         return sector_family(a, "sector");
       }},
      {"slit",
       [](const GalleryParams& gp) {
         Params ps("slit", gp, {});
         return sector_family(-1.0, "slit");
       }},
      {"loglinear",
       [](const GalleryParams& gp) {
         Params ps("loglinear", gp, {});
         expr::Ast g = expr::parse("-0.5*(1-z^2)*log((1+z)/(1-z))");
         return make_generator(0.0, HerglotzSpec::quotient(g, 0.0), g, "loglinear");
       }},
      {"contact_alpha",
       [](const GalleryParams& gp) {
         Params ps("contact_alpha", gp, {"alpha"});
         double a = ps.get("alpha", 0.5);
         ps.require(a > 0.0 && a < 1.0, "alpha must lie in (0,1)");
         std::string w = "((i-z)/(1-i*z))^" + number_text(a);
         GeneratorSpec g = make_generator(1.0, HerglotzSpec::expression(expr::parse("-i*" + w)),
                                          expr::parse("-i*(1-z)^2*" + w), "contact_alpha");
         return anchor_branch(g, 0.0, cplx(0, -1) * std::polar(1.0, kPi * a / 2));
       }},
      {"arc_to_dw",
       [](const GalleryParams& gp) {
         Params ps("arc_to_dw", gp, {"beta"});
         double b = ps.get("beta", 0.5);
         ps.require(b > 0.0 && b < 1.0, "beta must lie in (0,1)");
         std::string rot = expr::complex_text(std::polar(1.0, (1.0 - b) * kPi / 2));
         std::string pa = rot + "*" + kZeta + "^" + number_text(b);
         return make_generator(1.0, HerglotzSpec::expression(expr::parse(pa)), expr::parse("(1-z)^2*" + pa),
                               "arc_to_dw");
       }},
      {"blaschke_osc",
       [](const GalleryParams& gp) {
         Params ps("blaschke_osc", gp, {"N", "tau_re", "tau_im"});
         cplx tau = tau_param(ps);
         return make_generator(tau, HerglotzSpec::blaschke_mobius(BlaschkeHyperbolic::factorial(count_param(ps))),
                               "blaschke_osc");
       }},
      {"prescribed_alphas",
       [](const GalleryParams& gp) {
         Params ps("prescribed_alphas", gp, {"alpha_plus", "alpha_minus", "N", "tau_re", "tau_im"});
         double ap = ps.get("alpha_plus", 0.5), am = ps.get("alpha_minus", -0.5);
         ps.require(-1.0 <= am && am <= ap && ap <= 1.0, "need -1 <= alpha_minus <= alpha_plus <= 1");
         cplx tau = tau_param(ps);
         double beta = 0.5 * (ap - am), gamma = 0.5 * (ap + am);
         HerglotzSpec tail = HerglotzSpec::expression(expr::parse("((1-z)/(1+z))^" + number_text(gamma)));
         if (beta == 0.0) return make_generator(tau, tail, "prescribed_alphas");
         HerglotzSpec osc =
             HerglotzSpec::power(HerglotzSpec::blaschke_mobius(BlaschkeHyperbolic::factorial(count_param(ps))), beta);
         return make_generator(tau, HerglotzSpec::product({osc, tail}), "prescribed_alphas");
       }},
      {"no_reg_sing",
       [](const GalleryParams& gp) {
         Params ps("no_reg_sing", gp, {"alpha", "N", "tau_re", "tau_im"});
         double a = ps.get("alpha", 0.5);
         ps.require(a > -1.0 && a < 1.0, "alpha must lie in (-1,1)");
         cplx tau = tau_param(ps);
         // F = H^{-1}(1 + log(1 + H)) maps the disc into itself
         expr::Ast inner = expr::parse("(log(1+" + kZeta + "))/(2+log(1+" + kZeta + "))");
         HerglotzSpec pstar = HerglotzSpec::blaschke_mobius(BlaschkeHyperbolic::factorial(count_param(ps)));
         HerglotzSpec tail = HerglotzSpec::expression(expr::parse("((1-z)/(1+z))^" + number_text(a)));
         HerglotzSpec raw = HerglotzSpec::product({tail, HerglotzSpec::power(pstar, 1.0 - std::abs(a), inner)});
         double norm = raw(0.0).real();
         return make_generator(tau, HerglotzSpec::product({raw}, 1.0 / norm), "no_reg_sing");
       }},
      {"strip_wobble",
       [](const GalleryParams& gp) {
         Params ps("strip_wobble", gp, {"alpha", "a"});
         double al = ps.get("alpha", 0.5);
         ps.require(al > -1.0 && al < 1.0 && al != 0.0, "alpha must lie in (-1,1) without 0");
         double bound = kPi * (1.0 - std::abs(al)) / 2;
         double a = ps.get("a", std::asinh(bound));
         ps.require(a > 0.0 && std::sinh(a) <= bound * (1 + 1e-12), "need 0 < a and sinh a <= pi(1-|alpha|)/2");
         // amplitude keeping |arg p| <= pi/2: |alpha| pi/2 + c cosh a <= pi/2
         double c = bound / std::cosh(a);
         std::string f = "(" + number_text(2.0 * a / kPi) + "*log(" + kZeta + "))";
         std::string sinf = "((exp(i*" + f + ")-exp(-(i*" + f + ")))/(2*i))";
         std::string pa = kZeta + "^" + number_text(al) + "*exp(i*" + number_text(c) + "*" + sinf + ")";
         return make_generator(0.0, HerglotzSpec::expression(expr::parse(pa)), expr::parse("-z*" + pa),
                               "strip_wobble");
       }},
  };
  return reg;
}

}  // namespace

GeneratorSpec gallery(const std::string& name, const GalleryParams& params) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw DomainError("unknown gallery entry '" + name + "'");
  return it->second(params);
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

std::vector<GeneratorSpec> gallery_all() {
  std::vector<GeneratorSpec> out;
  for (const auto& n : gallery_names()) out.push_back(gallery(n));
  GeneratorSpec s = gallery("sector", {{"alpha", -0.5}});
  s.name = "sector(-0.5)";
  out.push_back(s);
  return out;
}

}  // namespace holoflow
