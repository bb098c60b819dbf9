#include "holoflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "holoflow/koenigs.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {

constexpr double kLn2 = 0.6931471805599453;
// Argument changes below this are rounding in arg() itself.
constexpr double kArgRoundoff = 1e-13;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) { return std::mt19937_64(seed + 0x9E3779B97F4A7C15ULL * index); }

// Smallest angle (vertex at the origin) containing every direction in args.
double smallest_cone(std::vector<double> args) {
  if (args.size() < 2) return 0.0;
  for (double& a : args) a = canonical_angle(a);
  std::sort(args.begin(), args.end());
  double gap = args.front() + kTwoPi - args.back();
  for (std::size_t i = 1; i < args.size(); ++i) gap = std::max(gap, args[i] - args[i - 1]);
  double alpha = kTwoPi - gap;
  return alpha < kArgRoundoff ? 0.0 : alpha;
}

// Boundary pieces in coordinates w - w0, so offsets from w0 keep full relative precision.
std::vector<ChainPiece> relative_pieces(const PlanarDomain& dom, cplx w0) {
  std::vector<ChainPiece> out;
  for (const auto& p : dom.pieces()) out.push_back(p.translated(w0));
  return out;
}

std::vector<cplx> dedupe(std::vector<cplx> pts, double tol) {
  std::vector<cplx> out;
  for (cplx p : pts)
    if (std::none_of(out.begin(), out.end(), [&](cplx q) { return std::abs(p - q) <= tol; })) out.push_back(p);
  return out;
}

SubdivisionVerdict combine(const std::vector<const SeriesReport*>& reps) {
  bool all = true;
  for (auto* r : reps) {
    if (r->verdict == SeriesVerdict::diverges) return SubdivisionVerdict::fails_sufficient_condition;
    if (r->verdict != SeriesVerdict::converges) all = false;
  }
  return all ? SubdivisionVerdict::yes : SubdivisionVerdict::inconclusive;
}

std::vector<double> squares(const std::vector<double>& v) {
  std::vector<double> s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] * v[i];
  return s;
}

}  // namespace

std::string to_string(DiniVerdict v) {
  switch (v) {
    case DiniVerdict::dini: return "dini";
    case DiniVerdict::not_dini: return "not-dini";
    case DiniVerdict::not_a_corner: return "not-a-corner";
    default: return "inconclusive";
  }
}

std::string to_string(SubdivisionVerdict v) {
  switch (v) {
    case SubdivisionVerdict::yes: return "yes";
    case SubdivisionVerdict::fails_sufficient_condition: return "fails-sufficient-condition";
    default: return "inconclusive";
  }
}

CornerReport dini_corner(const PlanarDomain& dom, cplx w0, double target_opening, const CornerOptions& opts) {
  if (!(opts.rho0 > 0.0) || opts.shells < 2 || opts.per_shell < 1) throw DomainError("invalid corner options");
  if (!(dom.boundary_distance(w0) <= dom.epsilon())) throw DomainError("w0 does not lie on the boundary chain");
  CornerReport rep;
  rep.vertex = w0;
  rep.target_opening = target_opening;

  const int per = opts.per_shell;
  const int n_radii = opts.shells * per + 1;
  std::vector<double> radii(n_radii);
  for (int i = 0; i < n_radii; ++i) radii[i] = opts.rho0 * std::exp2(-double(i) / per);
  const auto rel = relative_pieces(dom, w0);
  std::vector<std::vector<cplx>> hits(n_radii);
  parallel_for(n_radii, [&](std::size_t i) {
    std::vector<cplx> all;
    for (const auto& p : rel) {
      auto h = p.circle_intersections(0.0, radii[i]);
      all.insert(all.end(), h.begin(), h.end());
    }
    hits[i] = dedupe(all, 1e-12 * radii[i]);
  });
  for (int i = 0; i < n_radii; ++i) {
    if (hits[i].size() != 2) {
      rep.verdict = DiniVerdict::not_a_corner;
      rep.reason = "circle of radius " + std::to_string(radii[i]) + " meets the boundary " +
                   std::to_string(hits[i].size()) + " times";
      return rep;
    }
  }

  // side assignment: the domain lies counterclockwise from the minus side to the plus side
  double a0 = std::arg(hits[0][0]), a1 = std::arg(hits[0][1]);
  double ccw = canonical_angle(a1 - a0);
  bool swap = false;
  if (dom.has_membership()) {
    cplx probe = w0 + radii[0] * unit_at(a0 + 0.5 * ccw);
    swap = dom.membership(probe) != Membership::inside;
  } else {
    swap = ccw > kPi;
  }
  double prev_m = swap ? a1 : a0, prev_p = swap ? a0 : a1;
  for (int i = 0; i < n_radii; ++i) {
    double b0 = std::arg(hits[i][0]), b1 = std::arg(hits[i][1]);
    // keep each side continuous in the unwrapped argument
    double d00 = std::abs(angle_difference(prev_m, b0)) + std::abs(angle_difference(prev_p, b1));
    double d01 = std::abs(angle_difference(prev_m, b1)) + std::abs(angle_difference(prev_p, b0));
    if (d01 < d00) std::swap(b0, b1);
    prev_m += angle_difference(prev_m, b0);
    prev_p += angle_difference(prev_p, b1);
    rep.radii.push_back(radii[i]);
    rep.gamma_minus.push_back(prev_m);
    rep.gamma_plus.push_back(prev_p);
    rep.openings.push_back(canonical_angle(prev_p - prev_m) == 0.0 ? kTwoPi : canonical_angle(prev_p - prev_m));
  }
  rep.opening = rep.openings.back();
  rep.opening_error = std::abs(rep.opening - target_opening);

  std::vector<double> terms;
  for (int j = 0; j < opts.shells; ++j) {
    double osc = 0.0;
    for (const auto* side : {&rep.gamma_minus, &rep.gamma_plus}) {
      auto first = side->begin() + j * per, last = side->begin() + (j + 1) * per + 1;
      auto [lo, hi] = std::minmax_element(first, last);
      osc = std::max(osc, *hi - *lo);
    }
    if (osc < kArgRoundoff) osc = 0.0;
    rep.oscillation.push_back(osc);
    terms.push_back((j + 1) * osc * kLn2);
  }
  rep.proxy = series_verdict(terms);
  switch (rep.proxy.verdict) {
    case SeriesVerdict::converges: rep.verdict = DiniVerdict::dini; break;
    case SeriesVerdict::diverges:
      rep.verdict = DiniVerdict::not_dini;
      rep.reason = "modulus-of-continuity proxy keeps growing";
      break;
    default: rep.verdict = DiniVerdict::inconclusive; rep.reason = "proxy tail exponent undecided";
  }
  return rep;
}

namespace {

SideReport side_report(std::vector<double> d) {
  SideReport s;
  std::sort(d.begin(), d.end(), std::greater<>());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  s.distances = d;
  if (d.size() < 3) return s;
  std::vector<double> terms;
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    double l = std::log(d[n] / d[n + 1]);
    terms.push_back(l * l);
  }
  s.sums = series_verdict(terms);
  s.dense = s.sums.verdict == SeriesVerdict::converges;
  return s;
}

}  // namespace

LocalDensityReport locally_dense(const std::vector<cplx>& side_a, const std::vector<cplx>& side_b, cplx w0) {
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  std::vector<double> da, db;
  for (cplx p : side_a) da.push_back(std::abs(p - w0));
  for (cplx p : side_b) db.push_back(std::abs(p - w0));
  for (const auto* v : {&da, &db})
    for (double d : *v) {
      if (!(d > 0.0)) throw DomainError("sample points must differ from w0");
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  if (!(dmax / dmin >= 1e6)) throw DomainError("distances to w0 must span at least six decades");
  LocalDensityReport rep;
  rep.side[0] = side_report(da);
  rep.side[1] = side_report(db);
  rep.locally_dense = rep.side[0].dense && rep.side[1].dense;
  if (da.empty() || db.empty())
    rep.reason = "one side of the curve has no points";
  else if (!rep.locally_dense)
    rep.reason = "squared log-ratio sum does not converge on some side";
  return rep;
}

LocalDensityReport locally_dense(const std::vector<cplx>& E, cplx w0) {
  if (E.size() < 2) throw DomainError("need at least two points");
  std::vector<std::pair<double, std::size_t>> args;
  for (std::size_t i = 0; i < E.size(); ++i) args.emplace_back(canonical_angle(std::arg(E[i] - w0)), i);
  std::sort(args.begin(), args.end());
  const std::size_t n = args.size();
  // the two widest angular gaps separate the two sides
  std::vector<std::pair<double, std::size_t>> gaps;  // gap after sorted index i
  for (std::size_t i = 0; i < n; ++i) {
    double next = i + 1 < n ? args[i + 1].first : args[0].first + kTwoPi;
    gaps.emplace_back(next - args[i].first, i);
  }
  std::sort(gaps.begin(), gaps.end(), std::greater<>());
  std::vector<cplx> a, b;
  if (kTwoPi - gaps[0].first < kPi / 8) {
    a = E;  // every point leaves w0 in one direction
  } else {
    std::size_t c1 = gaps[0].second, c2 = gaps[1].second;
    for (std::size_t k = 1; k <= n; ++k) {
      std::size_t i = (c1 + k) % n;
      a.push_back(E[args[i].second]);
      if (i == c2) {
        for (std::size_t m = 1; m < n && (c2 + m) % n != (c1 + 1) % n; ++m) b.push_back(E[args[(c2 + m) % n].second]);
        break;
      }
    }
  }
  return locally_dense(a, b, w0);
}

SectorTestReport sector_test(const PlanarDomain& dom, cplx w0, cplx nu, double theta, double rho, std::uint64_t seed,
                             int samples) {
  if (!(theta > 0.0 && theta < kTwoPi)) throw DomainError("sector opening theta must lie in (0, 2pi)");
  if (!(rho > 0.0)) throw DomainError("sector radius must be positive");
  if (!(std::abs(nu) > 0.0)) throw DomainError("sector direction must be nonzero");
  const double dir = std::arg(nu);
  SectorTestReport rep;
  auto in_sector = [&](cplx off) {
    double r = std::abs(off);
    return r > 1e-12 * rho && r < rho && std::abs(angle_difference(dir, std::arg(off))) < 0.5 * theta - 1e-9;
  };
  // the boundary must not enter the open sector
  for (const auto& piece : relative_pieces(dom, w0)) {
    for (cplx off : piece.annulus_samples(0.0, 0.0, rho, 4096)) {
      ++rep.samples;
      if (in_sector(off)) {
        rep.witness = w0 + off;
        return rep;
      }
    }
  }
  std::mt19937_64 rng = stream(seed, 0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<cplx> pts(samples);
  for (auto& p : pts) {
    double r = rho * std::sqrt(U(rng));
    double phi = dir + theta * (U(rng) - 0.5);
    p = w0 + r * unit_at(phi);
  }
  std::vector<char> out(samples);
  parallel_for(samples, [&](std::size_t i) { out[i] = dom.membership(pts[i]) == Membership::outside; });
  rep.samples += samples;
  for (int i = 0; i < samples; ++i)
    if (out[i]) {
      rep.witness = pts[i];
      return rep;
    }
  rep.contained = true;
  return rep;
}

BertilssonReport bertilsson_alphas(const PlanarDomain& dom, cplx w0, double gamma, int k_max, std::uint64_t seed) {
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
  if (k_max < 1) throw DomainError("k_max must be positive");
  BertilssonReport rep;
  rep.gamma = gamma;
  rep.alphas.resize(k_max);
  const auto rel = relative_pieces(dom, w0);
  const PlanarDomain rel_dom = dom.translated(w0);
  parallel_for(k_max, [&](std::size_t k) {
    double r_out = std::pow(gamma, -double(k)), r_in = r_out / gamma;
    std::vector<double> args;
    for (const auto& piece : rel)
      for (cplx off : piece.annulus_samples(0.0, r_in, r_out, 64)) args.push_back(std::arg(off));
    if (dom.has_membership()) {
      std::mt19937_64 rng = stream(seed, k + 1);
      std::uniform_real_distribution<double> U(0.0, 1.0);
      for (int s = 0; s < kBertilssonSamples; ++s) {
        double r = std::sqrt(r_in * r_in + (r_out * r_out - r_in * r_in) * U(rng));
        cplx off = r * unit_at(kTwoPi * U(rng));
        // below the band scale every sample is in the band; the sharp test decides there
        Membership m = rel_dom.membership(off);
        bool outside = m == Membership::outside ||
                       (m == Membership::boundary_band && rel_dom.kind() != DomainKind::chain && !rel_dom.contains(off));
        if (outside) args.push_back(std::arg(off));
      }
    }
    rep.alphas[k] = smallest_cone(std::move(args));
  });
  double s = 0.0;
  for (double a : rep.alphas) rep.partial_sums.push_back(s += a);
  SeriesReport sr = series_verdict(rep.alphas);
  rep.tail_exponent = sr.tail_exponent;
  rep.verdict = sr.verdict;
  return rep;
}

SubdivisionReport rw_subdivision(const std::function<double(double)>& omega, const SubdivisionOptions& opts) {
  if (!(opts.u_max > opts.u0)) throw DomainError("u range must be increasing");
  double w0 = omega(opts.u0);
  if (!(w0 >= 0.0 && std::isfinite(w0))) throw DomainError("defect at u0 must be finite and nonnegative");
  SubdivisionReport rep;
  double u = opts.u0;
  rep.u.push_back(u);
  while (static_cast<int>(rep.delta.size()) < opts.max_terms && u < opts.u_max) {
    double w = omega(u);
    if (!(w > 0.0)) {
      rep.note = "defect vanishes from u = " + std::to_string(u);
      break;
    }
    // u_next - u = omega(u_next); the left side increases and the right side does not
    double lo = u, hi = u + w;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      (mid - u - omega(mid) < 0.0 ? lo : hi) = mid;
    }
    double next = hi;
    if (!(next > u)) {
      rep.note = "subdivision step fell below double resolution at u = " + std::to_string(u);
      break;
    }
    rep.delta.push_back(next - u);
    rep.theta1.push_back(w);
    rep.theta2.push_back(w);
    rep.u.push_back(next);
    u = next;
  }
  rep.delta_sums = series_verdict(squares(rep.delta));
  rep.theta1_sums = series_verdict(squares(rep.theta1));
  rep.theta2_sums = series_verdict(squares(rep.theta2));
  rep.verdict = combine({&rep.delta_sums, &rep.theta1_sums, &rep.theta2_sums});
  return rep;
}

SubdivisionReport rw_subdivision(const PlanarDomain& dom, const SubdivisionOptions& opts) {
  if (!dom.has_membership()) throw DomainError("strip domain needs membership");
  if (!(opts.u_max > opts.u0)) throw DomainError("u range must be increasing");
  const int grid = 2048;
  const double snap = 10.0 * dom.epsilon();
  std::vector<double> us(grid + 1), lo_end(grid + 1), hi_end(grid + 1);
  for (int i = 0; i <= grid; ++i) us[i] = opts.u0 + (opts.u_max - opts.u0) * i / grid;
  auto inside = [&](cplx w) { return dom.membership(w) == Membership::inside; };
  // end of the cross-section component through u + 0i in direction s
  auto cross_end = [&](double u, double s) {
    const int steps = 512;
    double prev = 0.0;
    for (int k = 1; k <= steps; ++k) {
      double y = 0.5 * k / steps;
      if (!inside(cplx(u, s * y))) {
        double a = prev, b = y;
        for (int it = 0; it < 60; ++it) {
          double m = 0.5 * (a + b);
          (inside(cplx(u, s * m)) ? a : b) = m;
        }
        return s * a;
      }
      prev = y;
    }
    throw DomainError("strip domain reaches |Im| = 1/2 at u = " + std::to_string(u));
  };
  parallel_for(grid + 1, [&](std::size_t i) {
    if (!inside(cplx(us[i], 0.0))) throw DomainError("strip domain misses the real axis at u = " + std::to_string(us[i]));
    lo_end[i] = cross_end(us[i], -1.0);
    hi_end[i] = cross_end(us[i], 1.0);
  });
  std::vector<double> d1(grid + 1), d2(grid + 1), omega(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    d1[i] = std::abs(lo_end[i] + 0.5);
    d2[i] = std::abs(hi_end[i] - 0.5);
    if (d1[i] < snap) d1[i] = 0.0;
    if (d2[i] < snap) d2[i] = 0.0;
  }
  omega[grid] = std::max(d1[grid], d2[grid]);
  for (int i = grid - 1; i >= 0; --i) omega[i] = std::max({omega[i + 1], d1[i], d2[i]});
  auto index_at = [&](double u) {
    double f = (u - opts.u0) / (opts.u_max - opts.u0) * grid;
    return std::clamp(static_cast<int>(std::floor(f)), 0, grid);
  };
  auto omega_fn = [&](double u) { return omega[index_at(u)]; };
  SubdivisionReport rep = rw_subdivision(omega_fn, opts);
  // one-sided defects over each subdivision interval
  for (std::size_t n = 0; n + 1 < rep.u.size(); ++n) {
    int a = index_at(rep.u[n]), b = index_at(rep.u[n + 1]);
    double t1 = 0.0, t2 = 0.0;
    for (int i = a; i <= b; ++i) {
      t1 = std::max(t1, lo_end[i] + 0.5 < snap ? 0.0 : lo_end[i] + 0.5);
      t2 = std::max(t2, 0.5 - hi_end[i] < snap ? 0.0 : 0.5 - hi_end[i]);
    }
    rep.theta1[n] = t1;
    rep.theta2[n] = t2;
  }
  rep.theta1_sums = series_verdict(squares(rep.theta1));
  rep.theta2_sums = series_verdict(squares(rep.theta2));
  rep.verdict = combine({&rep.delta_sums, &rep.theta1_sums, &rep.theta2_sums});
  return rep;
}

cplx strip_transform(cplx w, cplx w0, double alpha, double C0, double cut_direction) {
  if (!(alpha >= -1.0 && alpha < 1.0)) throw DomainError("alpha must lie in [-1, 1)");
  if (w == w0) throw DomainError("strip transform is singular at w0");
  double off = canonical_angle(std::arg(w - w0) - cut_direction);
  if (off == 0.0) throw DomainError("w lies on the branch cut");
  double arg = cut_direction - kTwoPi + off;
  cplx log_w(std::log(std::abs(w - w0)), arg);
  return cplx(0.0, C0) - log_w / ((1.0 - alpha) * kPi);
}

namespace {

double cross(cplx o, cplx a, cplx b) { return (a - o).real() * (b - o).imag() - (a - o).imag() * (b - o).real(); }

std::vector<cplx> convex_hull(std::vector<cplx> p) {
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  if (p.size() < 3) return p;
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

bool in_hull(const std::vector<cplx>& h, cplx w) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (cross(h[i], h[(i + 1) % h.size()], w) < 0) return false;
  return true;
}

}  // namespace

HullCheckReport koenigs_image_hull_check(const KoenigsEvaluator& k, const PlanarDomain& omega0, cplx center,
                                         double radius, int grid, std::uint64_t seed) {
  if (grid < 8) throw DomainError("hull grid must be at least 8");
  if (!(radius > 0.0)) throw DomainError("sampling radius must be positive");
  std::vector<cplx> hs(static_cast<std::size_t>(grid) * grid);
  parallel_for(hs.size(), [&](std::size_t idx) {
    std::size_t i = idx / grid, j = idx % grid;
    double r = 1.0 - std::exp2(-20.0 * (i + 1) / grid);
    hs[idx] = k.h(r * unit_at(kTwoPi * j / grid));
  });
  auto hull = convex_hull(hs);
  HullCheckReport rep;
  std::mt19937_64 rng = stream(seed, 0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int s = 0; s < 4096; ++s) {
    cplx w = center + radius * std::sqrt(U(rng)) * unit_at(kTwoPi * U(rng));
    if (omega0.membership(w) != Membership::inside) continue;
    ++rep.checked;
    if (!in_hull(hull, w)) {
      ++rep.outside_hull;
      if (!rep.witness) rep.witness = w;
    }
  }
  return rep;
}

}  // namespace holoflow
