#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "holoflow/disc.hpp"

namespace holoflow {

template <std::size_t N>
using CState = std::array<cplx, N>;

struct Dopri5Options {
  double tol = 1e-10;
  double h_min = 1e-15;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
};

struct Dopri5Stats {
  long accepted = 0;
  long rejected = 0;
  long halvings = 0;  // shrinks forced by an inadmissible stage
  double max_error = 0.0;
  bool truncated = false;
  std::string reason;
};

// Dormand-Prince 5(4) with PI step control. A stage whose state fails
// `admissible` halves the step instead of being projected back.
template <std::size_t N>
class Dopri5 {
 public:
  Dopri5(CState<N> y0, double t0, Dopri5Options opts) : y_(y0), t_(t0), opts_(opts) {}

  double t() const { return t_; }
  const CState<N>& y() const { return y_; }
  const Dopri5Stats& stats() const { return stats_; }
  double last_error() const { return last_err_; }
  double step_size() const { return h_; }

  // Integrates up to exactly t_target. `on_step(t, y, err)` runs after every
  // accepted step. Returns false if the run was truncated.
  template <class Rhs, class Admissible, class OnStep>
  bool advance_to(Rhs&& f, Admissible&& admissible, double t_target, OnStep&& on_step) {
    if (stats_.truncated) return false;
    if (t_target <= t_) return true;
    CState<N> k1;
    if (!eval(f, admissible, y_, k1)) return truncate("initial state is not admissible");
    if (h_ <= 0.0) h_ = initial_step(f, admissible, k1, t_target - t_);
    while (t_ < t_target) {
      if (stats_.accepted + stats_.rejected >= opts_.max_steps) return truncate("step budget exhausted");
      double h = std::min({h_, opts_.h_max, t_target - t_});
      bool last = (h == t_target - t_);
      CState<N> ynew, k7;
      double err = 0.0;
      if (!attempt(f, admissible, k1, h, ynew, k7, err)) {
        ++stats_.halvings;
        // no growth on the next accepted step, or the run creeps toward the boundary forever
        rejected_last_ = true;
        h_ = 0.5 * h;
        if (h_ < opts_.h_min * std::max(1.0, std::abs(t_))) return truncate("step size underflow near an inadmissible region");
        continue;
      }
      if (err <= 1.0) {
        ++stats_.accepted;
        t_ = last ? t_target : t_ + h;
        frozen_ = ynew == y_ ? frozen_ + 1 : 0;
        if (frozen_ >= kFrozenLimit) return truncate("state frozen at double precision");
        y_ = ynew;
        k1 = k7;
        last_err_ = err * opts_.tol;
        stats_.max_error = std::max(stats_.max_error, last_err_);
        double fac = kSafety * std::pow(std::max(err, 1e-10), -kExpo1) * std::pow(err_old_, kBeta);
        fac = std::clamp(fac, 0.2, 10.0);
        if (rejected_last_) fac = std::min(fac, 1.0);
        err_old_ = std::max(err, 1e-4);
        rejected_last_ = false;
        // a step clipped by t_target or h_max keeps the previous proposal
        if (!(h < h_)) h_ = h * fac;
        on_step(t_, y_, last_err_);
      } else {
        ++stats_.rejected;
        rejected_last_ = true;
        double fac = std::max(0.2, kSafety * std::pow(err, -0.2));
        h_ = h * fac;
        if (h_ < opts_.h_min * std::max(1.0, std::abs(t_))) return truncate("step size underflow (error control)");
      }
    }
    return true;
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  // Accepted steps in a row that leave every component bitwise unchanged.
  static constexpr int kFrozenLimit = 1000;

  bool truncate(const char* why) {
    stats_.truncated = true;
    stats_.reason = why;
    return false;
  }

  template <class Rhs, class Admissible>
  static bool eval(Rhs& f, Admissible& admissible, const CState<N>& y, CState<N>& out) {
    if (!admissible(y)) return false;
    try {
      out = f(y);
    } catch (const NumericalError&) {
      return false;
    }
    for (const auto& v : out)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double norm_err(const CState<N>& e, const CState<N>& a, const CState<N>& b) const {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = opts_.tol * std::max({1.0, std::abs(a[i]), std::abs(b[i])});
      m = std::max(m, std::abs(e[i]) / sc);
    }
    return m;
  }

  template <class Rhs, class Admissible>
  double initial_step(Rhs& f, Admissible& admissible, const CState<N>& f0, double span) {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = opts_.tol * std::max(1.0, std::abs(y_[i]));
      d0 = std::max(d0, std::abs(y_[i]) / sc);
      d1 = std::max(d1, std::abs(f0[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    CState<N> y1, f1;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + h0 * f0[i];
      if (eval(f, admissible, y1, f1)) break;
      h0 *= 0.5;
    }
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = opts_.tol * std::max(1.0, std::abs(y_[i]));
      d2 = std::max(d2, std::abs(f1[i] - f0[i]) / sc / h0);
    }
    double mx = std::max(d1, d2);
    double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 0.2);
    return std::min({100 * h0, h1, span});
  }

  template <class Rhs, class Admissible>
  bool attempt(Rhs& f, Admissible& admissible, const CState<N>& k1, double h, CState<N>& ynew, CState<N>& k7,
               double& err) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    CState<N> s, k2, k3, k4, k5, k6;
    for (std::size_t i = 0; i < N; ++i) s[i] = y_[i] + h * a21 * k1[i];
    if (!eval(f, admissible, s, k2)) return false;
    for (std::size_t i = 0; i < N; ++i) s[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
    if (!eval(f, admissible, s, k3)) return false;
    for (std::size_t i = 0; i < N; ++i) s[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    if (!eval(f, admissible, s, k4)) return false;
    for (std::size_t i = 0; i < N; ++i) s[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    if (!eval(f, admissible, s, k5)) return false;
    for (std::size_t i = 0; i < N; ++i)
      s[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    if (!eval(f, admissible, s, k6)) return false;
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y_[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    if (!eval(f, admissible, ynew, k7)) return false;
    CState<N> e;
    for (std::size_t i = 0; i < N; ++i)
      e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    err = norm_err(e, y_, ynew);
    return true;
  }

  CState<N> y_;
  double t_;
  Dopri5Options opts_;
  Dopri5Stats stats_;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  double last_err_ = 0.0;
  bool rejected_last_ = false;
  int frozen_ = 0;
};

}  // namespace holoflow
