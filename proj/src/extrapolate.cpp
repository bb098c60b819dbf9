#include "holoflow/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {
ExecPolicy g_policy = ExecPolicy::openmp;
constexpr double kRoundoff = 1e-13;
// Fitted exponents at or below this cannot be told apart from logarithmic growth.
constexpr double kGammaFloor = 0.02;
// Limits below this fraction of the largest sample count as 0.
constexpr double kZeroScale = 1e-6;
// Consecutive samples this close are treated as already at the limit.
constexpr double kSettled = 1e-10;
// Relative agreement of an extrapolant triple that certifies a plateau.
constexpr double kPlateau = 1e-8;
constexpr double kHalvingsPerDecade = 3.321928094887362;
}  // namespace

ExecPolicy default_policy() { return g_policy; }
void set_default_policy(ExecPolicy p) { g_policy = p; }

std::string to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::converged: return "converged";
    case LimitStatus::diverged: return "diverged";
    default: return "inconclusive";
  }
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

LimitEstimate extrapolate_limit(std::span<const cplx> v, double rel_tol) {
  LimitEstimate est;
  const std::size_t n = v.size();
  if (n == 0) return est;
  est.value = v.back();
  if (n < 3) return est;

  std::vector<double> gammas;
  for (std::size_t i = 2; i < n; ++i) {
    cplx d1 = v[i - 1] - v[i - 2];
    cplx d2 = v[i] - v[i - 1];
    double scale = std::max(std::abs(v[i]), std::numeric_limits<double>::min());
    cplx e = v[i];
    double gamma = 60.0;
    if (std::abs(d2) > kRoundoff * scale) {
      if (std::abs(d1) <= kRoundoff * scale) {
        gamma = 0.0;
      } else {
        cplx q = d2 / d1;
        gamma = -std::log2(std::abs(q));
        if (std::abs(q) < 1.0 && std::abs(1.0 - q) > 1e-12) e = v[i] + d2 * q / (1.0 - q);
      }
    }
    est.extrapolants.push_back(e);
    gammas.push_back(gamma);
  }
  est.gamma = gammas.back();

  std::size_t m = std::min<std::size_t>(n - 1, 10);
  if (std::abs(v[n - 1 - m]) > 0 && std::abs(v[n - 1]) > 0) {
    est.modulus_drift = std::abs(std::log(std::abs(v[n - 1]) / std::abs(v[n - 1 - m]))) * kHalvingsPerDecade / m;
    est.phase_drift = std::abs(std::arg(v[n - 1] / v[n - 1 - m])) * kHalvingsPerDecade / m;
  }

  const auto& e = est.extrapolants;
  est.value = e.back();
  if (e.size() >= 3) {
    std::size_t k = e.size();
    auto triple_error = [&](std::size_t i) { return std::max(std::abs(e[i] - e[i - 1]), std::abs(e[i - 1] - e[i - 2])); };
    est.error = triple_error(k - 1);
    bool settled = std::abs(v[n - 1] - v[n - 2]) <= kSettled * std::abs(v[n - 1]) &&
                   std::abs(v[n - 2] - v[n - 3]) <= kSettled * std::abs(v[n - 1]);
    // a sequence decaying to 0 is measured against its own initial size
    double peak = 0.0;
    for (cplx x : v) peak = std::max(peak, std::abs(x));
    auto scale = [&](std::size_t i) { return std::max(std::abs(e[i]), kZeroScale * peak); };
    if ((est.error <= rel_tol * scale(k - 1) && est.gamma > kGammaFloor) || settled) {
      est.status = LimitStatus::converged;
      return est;
    }
    // Cancellation noise grows as the gap shrinks. If an earlier triple agreed
    // far below the tolerance, that plateau is the limit.
    std::size_t best = 2;
    for (std::size_t i = 3; i < k; ++i)
      if (triple_error(i) / scale(i) < triple_error(best) / scale(best)) best = i;
    if (triple_error(best) <= kPlateau * scale(best) && gammas[best] > kGammaFloor) {
      est.status = LimitStatus::converged;
      est.noise_limited = true;
      est.value = e[best];
      est.error = triple_error(best);
      return est;
    }
  } else {
    est.error = std::abs(v[n - 1] - v[n - 2]);
  }
  auto grew = [&](std::size_t i) { return std::abs(v[i]) > (1.0 + kSettled) * std::abs(v[i - 1]); };
  bool growing = grew(n - 1) && grew(n - 2);
  if (est.gamma <= kGammaFloor && growing) {
    est.status = LimitStatus::diverged;
    est.value = v.back();
  }
  return est;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> windowed_slopes(std::span<const double> x, std::span<const double> y, std::size_t window) {
  std::vector<double> out;
  if (x.size() < window) return out;
  for (std::size_t i = 0; i + window <= x.size(); ++i) out.push_back(ls_slope(x.subspan(i, window), y.subspan(i, window)));
  return out;
}

SeriesReport series_verdict(std::span<const double> terms) {
  SeriesReport rep;
  double s = 0.0;
  for (double t : terms) {
    s += t;
    rep.partial_sums.push_back(s);
  }
  const std::size_t n = terms.size();
  if (n == 0) {
    rep.verdict = SeriesVerdict::converges;
    return rep;
  }
  std::size_t lo = std::max<std::size_t>(1, n / 10) - 1;
  std::vector<double> lx, ly;
  bool all_zero = true;
  for (std::size_t i = lo; i < n; ++i) {
    if (terms[i] != 0.0) all_zero = false;
    if (terms[i] > 0.0) {
      lx.push_back(std::log(double(i + 1)));
      ly.push_back(std::log(terms[i]));
    }
  }
  if (all_zero) {
    rep.tail_exponent = -std::numeric_limits<double>::infinity();
    rep.verdict = SeriesVerdict::converges;
    return rep;
  }
  if (lx.size() < 3) return rep;
  rep.tail_exponent = ls_slope(lx, ly);
  if (rep.tail_exponent < kConvergeExponent)
    rep.verdict = SeriesVerdict::converges;
  else if (rep.tail_exponent > kDivergeExponent)
    rep.verdict = SeriesVerdict::diverges;
  return rep;
}

}  // namespace holoflow
