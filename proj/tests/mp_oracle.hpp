#pragma once

// Extended-precision direct products for Blaschke values on (0,1).

#include <boost/multiprecision/mpfr.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

namespace holoflow::testing {

using boost::multiprecision::mpfr_float;

struct MpBlaschke {
  int sign = 1;
  double log_abs = 0.0;        // log|B|
  double log_abs_mobius = 0.0;  // log|(1+B)/(1-B)|
  double log_one_minus_z = 0.0;
};

// Working precision: `digits` significant digits on top of what is needed to
// resolve 1 - z ~ e^{-s}, 1 - x_n ~ e^{-a_n} and 1 +- B.
inline MpBlaschke mp_blaschke(const std::vector<double>& a, double s, int digits = 50) {
  double top = s;
  for (double an : a) top = std::max(top, an);
  const unsigned prec = static_cast<unsigned>(digits + top / std::log(10.0) + 40);
  mpfr_float::default_precision(prec);
  mpfr_float S(s);
  mpfr_float z = tanh(S / 2);
  mpfr_float B(1);
  for (double an : a) {
    mpfr_float x = tanh(mpfr_float(an) / 2);
    B *= (x - z) / (1 - x * z);
  }
  MpBlaschke out;
  out.sign = B < 0 ? -1 : 1;
  out.log_abs = static_cast<double>(log(abs(B)));
  out.log_abs_mobius = static_cast<double>(log(abs((1 + B) / (1 - B))));
  out.log_one_minus_z = static_cast<double>(log(1 - z));
  return out;
}

}  // namespace holoflow::testing
