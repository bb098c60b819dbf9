#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace holoflow {

using cplx = std::complex<double>;

enum class LimitStatus { converged, diverged, inconclusive };
std::string to_string(LimitStatus s);

// Limit of a sequence sampled at dyadic gaps g_k = s 2^{-k} under the model
// v_k = v + c g_k^gamma. Each consecutive triple gives one Aitken extrapolant.
struct LimitEstimate {
  LimitStatus status = LimitStatus::inconclusive;
  cplx value{0.0, 0.0};
  double error = 0.0;       // largest Cauchy difference among the last three extrapolants
  double gamma = 0.0;       // exponent fitted from the final triple
  double modulus_drift = 0.0;  // relative change of |v_k| per decade of the gap
  double phase_drift = 0.0;    // change of arg v_k per decade of the gap (radians)
  bool noise_limited = false;  // limit read off an earlier plateau, the tail being roundoff
  std::vector<cplx> extrapolants;
};

LimitEstimate extrapolate_limit(std::span<const cplx> values, double rel_tol = 1e-4);

// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

// Slopes over every window of `window` consecutive points.
std::vector<double> windowed_slopes(std::span<const double> x, std::span<const double> y, std::size_t window);

enum class SeriesVerdict { converges, diverges, inconclusive };
std::string to_string(SeriesVerdict v);

struct SeriesReport {
  std::vector<double> partial_sums;
  double tail_exponent = 0.0;  // fitted p in term_n ~ n^p over the last decade
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

// Thresholds for the tail exponent: below kConvergeExponent converges,
// above kDivergeExponent diverges.
inline constexpr double kConvergeExponent = -1.1;
inline constexpr double kDivergeExponent = -1.05;

SeriesReport series_verdict(std::span<const double> terms);

}  // namespace holoflow
