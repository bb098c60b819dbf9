#pragma once

#include <vector>

#include "holoflow/disc.hpp"

namespace holoflow {

struct Jet {
  cplx f;
  cplx df;
};

// Blaschke product prod (x_n - z)/(1 - x_n z) with zeros x_n = tanh(a_n / 2) on
// (0,1), stored through the hyperbolic coordinates a_n = log((1+x_n)/(1-x_n)).
// Factors tend to +1, so the sign on (x_j, x_{j+1}) is (-1)^j for every N.
class BlaschkeHyperbolic {
 public:
  explicit BlaschkeHyperbolic(std::vector<double> a);
  // a_n = n! for n = 1..N
  static BlaschkeHyperbolic factorial(int n_zeros);

  const std::vector<double>& a() const { return a_; }
  std::size_t size() const { return a_.size(); }
  std::vector<double> ratios() const;

  // B and B' at complex z. Each factor is written with eps_n = 1 - x_n =
  // 2/(e^{a_n}+1), so huge a_n never round x_n to 1.
  Jet eval(cplx z) const;
  // Direct product with materialized x_n; only trustworthy while a_n <= 30.
  cplx eval_naive(cplx z) const;

 private:
  std::vector<double> a_;
  std::vector<double> eps_;
};

struct BlaschkeLogValue {
  int sign = 1;
  double log_abs = 0.0;  // log|B|, -inf at a zero
  // log(-log|B|); stays finite when log|B| itself underflows to 0
  double log_neg_log_abs = 0.0;
};

// B at z = tanh(s/2), computed in the coordinate s = log((1+z)/(1-z)) where each
// factor equals sign(a_n - s) tanh(|s - a_n| / 2).
BlaschkeLogValue blaschke_log_eval(const BlaschkeHyperbolic& b, double s);

// log(1 - tanh(s/2)) = log 2 - s - log1p(e^{-s})
double log_one_minus_tanh_half(double s);

// log|p| for p = (1+B)/(1-B) at z = tanh(s/2).
double mobius_log_abs(const BlaschkeHyperbolic& b, double s);

// Hyperbolic midpoint between the j-th and (j+1)-th zeros (1-based), in the s coordinate.
double hyperbolic_midpoint(const BlaschkeHyperbolic& b, int j);

// (-1)^{j+1} log|p(z_j)| / log|1 - z_j| at the j-th hyperbolic midpoint.
double oscillation_ratio(const BlaschkeHyperbolic& b, int j);

}  // namespace holoflow
