#include "holoflow/blaschke.hpp"

#include <cmath>
#include <limits>

namespace holoflow {

BlaschkeHyperbolic::BlaschkeHyperbolic(std::vector<double> a) : a_(std::move(a)) {
  if (a_.empty()) throw DomainError("Blaschke product needs at least one zero");
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!(std::isfinite(a_[i]) && a_[i] > 0.0)) throw DomainError("Blaschke coordinates a_n must be positive");
    if (i > 0 && !(a_[i] > a_[i - 1])) throw DomainError("Blaschke coordinates a_n must be strictly increasing");
    eps_.push_back(2.0 / (std::exp(a_[i]) + 1.0));
  }
}

BlaschkeHyperbolic BlaschkeHyperbolic::factorial(int n_zeros) {
  if (n_zeros < 1 || n_zeros > 20) throw DomainError("factorial Blaschke product needs 1 <= N <= 20");
  std::vector<double> a;
  double f = 1.0;
  for (int n = 1; n <= n_zeros; ++n) {
    f *= n;
    a.push_back(f);
  }
  return BlaschkeHyperbolic(a);
}

std::vector<double> BlaschkeHyperbolic::ratios() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < a_.size(); ++i) r.push_back(a_[i] / a_[i - 1]);
  return r;
}

Jet BlaschkeHyperbolic::eval(cplx z) const {
  const std::size_t n = a_.size();
  const cplx u = 1.0 - z;
  std::vector<cplx> f(n), df(n);
  for (std::size_t k = 0; k < n; ++k) {
    double e = eps_[k];
    cplx den = u + e * z;
    f[k] = (u - e) / den;
    df[k] = -e * (2.0 - e) / (den * den);
  }
  std::vector<cplx> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * f[k];
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * f[k];
  cplx d = 0.0;
  for (std::size_t k = 0; k < n; ++k) d += prefix[k] * df[k] * suffix[k + 1];
  return {prefix[n], d};
}

cplx BlaschkeHyperbolic::eval_naive(cplx z) const {
  cplx b = 1.0;
  for (double a : a_) {
    double x = std::tanh(0.5 * a);
    b *= (x - z) / (1.0 - x * z);
  }
  return b;
}

BlaschkeLogValue blaschke_log_eval(const BlaschkeHyperbolic& b, double s) {
  if (!(s > 0.0)) throw DomainError("blaschke_log_eval needs s > 0");
  BlaschkeLogValue out;
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (double a : b.a()) {
    double d = std::abs(s - a);
    if (s > a) out.sign = -out.sign;
    if (d == 0.0) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.log_neg_log_abs = std::numeric_limits<double>::infinity();
      return out;
    }
    // -log tanh(d/2) = 2 atanh(e^{-d})
    double q = std::exp(-d);
    out.log_abs -= 2.0 * std::atanh(q);
    double ratio = (q > 1e-8) ? std::atanh(q) / q : 1.0;
    double t = std::log(2.0) - d + std::log(ratio);
    terms.push_back(t);
    mx = std::max(mx, t);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - mx);
  out.log_neg_log_abs = mx + std::log(acc);
  return out;
}

double log_one_minus_tanh_half(double s) { return std::log(2.0) - s - std::log1p(std::exp(-s)); }

namespace {
// log|1 - e^L| for L <= 0, using log(-L) when L itself is below double resolution
double log_one_minus_exp(double L, double log_neg_L) {
  if (-L > 1e-8) return std::log(-std::expm1(L));
  return log_neg_L + std::log1p(0.5 * L);
}
}  // namespace

double mobius_log_abs(const BlaschkeHyperbolic& b, double s) {
  BlaschkeLogValue v = blaschke_log_eval(b, s);
  if (std::isinf(v.log_abs)) return 0.0;
  double small = log_one_minus_exp(v.log_abs, v.log_neg_log_abs);
  double large = std::log1p(std::exp(v.log_abs));
  return v.sign > 0 ? large - small : small - large;
}

double hyperbolic_midpoint(const BlaschkeHyperbolic& b, int j) {
  if (j < 1 || static_cast<std::size_t>(j) >= b.size()) throw DomainError("midpoint index j must satisfy 1 <= j < N");
  return 0.5 * (b.a()[j - 1] + b.a()[j]);
}

double oscillation_ratio(const BlaschkeHyperbolic& b, int j) {
  double s = hyperbolic_midpoint(b, j);
  double sign = (j % 2 == 1) ? 1.0 : -1.0;  // (-1)^{j+1}
  return sign * mobius_log_abs(b, s) / log_one_minus_tanh_half(s);
}

}  // namespace holoflow
