#include "dini/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dini/random.hpp"

namespace dini {

namespace {

constexpr double kDim = 2.0;

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a * std::pow(b / a, n > 1 ? double(i) / (n - 1) : 0.0);
  return out;
}

double field_M(const SolutionField& u) { return std::max(1.0, u.potential.M); }

}  // namespace

// ---------------------------------------------------------------- monotonicity

MonotonicityReport fit_monotonicity(const FrequencyTrace& t, double M, double slack, double box) {
  std::vector<double> r, N;
  for (size_t i = 0; i < t.radii.size(); ++i)
    if (t.valid[i]) {
      r.push_back(t.radii[i]);
      N.push_back(t.N[i]);
    }
  if (r.size() < 8) throw DomainError("fit_monotonicity needs at least 8 valid radii");
  M = std::max(M, 1.0);
  MonotonicityReport rep;
  rep.M = M;
  rep.valid_radii = static_cast<int>(r.size());

  auto min_c2 = [&](double C1) {
    double need = 0.0;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
      double e0 = std::exp(C1 * r[i]), e1 = std::exp(C1 * r[i + 1]);
      double scale = std::max({std::abs(e0 * N[i]), std::abs(e1 * N[i + 1]), 1e-300});
      double lhs = e1 * N[i + 1] - e0 * N[i] + slack * scale;
      double coef = M * (e1 * r[i + 1] * r[i + 1] - e0 * r[i] * r[i]);
      if (lhs < 0) need = std::max(need, -lhs / coef);
    }
    return need;
  };
  auto violation = [&](double C1, double C2) {
    double worst = -HUGE_VAL;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
      double F0 = std::exp(C1 * r[i]) * (N[i] + C2 * M * r[i] * r[i]);
      double F1 = std::exp(C1 * r[i + 1]) * (N[i + 1] + C2 * M * r[i + 1] * r[i + 1]);
      // Same scale as min_c2 so the two agree on feasibility.
      double scale = std::max({std::abs(std::exp(C1 * r[i]) * N[i]),
                               std::abs(std::exp(C1 * r[i + 1]) * N[i + 1]), 1e-300});
      worst = std::max(worst, (F0 - F1) / scale);
    }
    return worst;
  };

  std::vector<double> grid{0.0};
  for (int i = 0; i <= 60; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 60.0));
  double best_c2 = HUGE_VAL;
  int first = -1;
  for (size_t i = 0; i < grid.size(); ++i) {
    double c2 = min_c2(grid[i]);
    if (c2 < best_c2) {
      best_c2 = c2;
      if (c2 <= box) rep.pareto.emplace_back(grid[i], c2);
    }
    if (first < 0 && c2 <= box) first = static_cast<int>(i);
  }
  rep.violation_at_zero = violation(0.0, 0.0);
  if (first < 0) {
    rep.pass = false;
    rep.C1 = box;
    rep.C2 = box;
    rep.max_violation = violation(box, box);
    return rep;
  }
  double C1 = grid[first];
  if (first > 0) {
    // Smallest feasible C1 between the last infeasible and first feasible grid values.
    double lo = grid[first - 1], hi = C1;
    for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (min_c2(mid) <= box) hi = mid;
      else lo = mid;
    }
    C1 = hi;
  }
  rep.C1 = C1;
  rep.C2 = min_c2(C1);
  rep.max_violation = violation(rep.C1, rep.C2);
  rep.pass = rep.max_violation <= slack * (1.0 + 1e-6);
  return rep;
}

// ---------------------------------------------------------------- three spheres

namespace {

void check_three_radii(double r1, double r2, double r3) {
  if (!(r1 > 0.0 && r1 < r2 && 2.0 * r2 < r3))
    throw DomainError("three-sphere radii must satisfy 0 < r1 < r2 < 2 r2 < r3");
}

// Cbar from N(r) <= Cbar (N(s) + C2 M), r < s, and sup |O(1)| on [r1, r3].
struct TraceConstants {
  double Cbar = 1.0, CO = 0.0;
};

TraceConstants trace_constants(const Probe& p, double r1, double r3, double C2, double M) {
  std::vector<double> radii = logspace(r1 / 4.0, r3, 24);
  FrequencyTrace t = frequency_trace(p, radii);
  TraceConstants tc;
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!t.valid[i]) continue;
    for (size_t j = i + 1; j < radii.size(); ++j) {
      if (!t.valid[j]) continue;
      double den = t.N[j] + C2 * M;
      if (den <= 0.0) {
        if (t.N[i] > 0.0) tc.Cbar = HUGE_VAL;
        continue;
      }
      tc.Cbar = std::max(tc.Cbar, t.N[i] / den);
    }
  }
  double tol = std::max(p.quad.tol, p.field->quad_tol);
  for (double r : radii) {
    if (r < r1 * (1 - 1e-12)) continue;
    double dr = default_dr(r, tol);
    if (r + dr > r3 * 1.5) dr = 0.5 * (1.5 * r3 - r);
    tc.CO = std::max(tc.CO, std::abs(height_variation_residual(p, r, dr)));
  }
  return tc;
}

}  // namespace

ThreeSphereReport three_sphere_H(const Probe& p, double r1, double r2, double r3,
                                 const MonotoneFit& fit) {
  check_three_radii(r1, r2, r3);
  const double M = field_M(*p.field);
  ThreeSphereReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.r3 = r3;
  double H1 = height(p, r1), H2 = height(p, 2.0 * r2), H3 = height(p, r3);
  if (!(H1 > 1e-300 && H2 > 1e-300 && H3 > 1e-300))
    throw DomainError("three_sphere_H: H vanishes (u = 0 near z0?)");
  TraceConstants tc = trace_constants(p, r1, r3, fit.C2, M);
  rep.Cbar = tc.Cbar;
  rep.CO = tc.CO;
  rep.a = std::log(r3 / (2.0 * r2));
  rep.b = rep.Cbar * rep.Cbar * std::log(2.0 * r2 / r1);
  rep.C = tc.CO * std::max(2.0 * r2 - r1, r3 - 2.0 * r2);
  rep.Cprime = fit.C2 * (rep.Cbar + 1.0) / rep.Cbar;
  const double w = rep.a + rep.b;
  double convex = (rep.b * std::log(H3) + rep.a * std::log(H1)) / w;
  double expo = rep.Cprime * std::sqrt(M) * rep.a;
  rep.lhs = std::log(H2);
  rep.rhs = convex + rep.C + expo;
  rep.C_needed = std::max(0.0, rep.lhs - convex - expo);
  rep.pass = std::isfinite(rep.rhs) && rep.lhs <= rep.rhs + 1e-9 * std::max(1.0, std::abs(rep.lhs));
  return rep;
}

SupNorm sup_norm(const SolutionField& u, Vec2 z0, double r) {
  if (!(r > 0.0)) throw DomainError("sup_norm: radius must be positive");
  const Region& reg = u.region;
  auto inside = [&](double s, double th) {
    return reg.level(z0 + s * Vec2{std::cos(th), std::sin(th)}) <= 0.0;
  };
  auto val = [&](double s, double th) {
    return std::abs(u.u.value(z0 + s * Vec2{std::cos(th), std::sin(th)}));
  };
  int nth = 128, ns = 80;
  SupNorm best;
  double best_s = 0.0, best_th = 0.0;
  double prev = -1.0;
  for (int pass = 0; pass < 5; ++pass) {
    double cur = -1.0, cs = 0, ct = 0;
    int count = 0;
    if (reg.level(z0) <= 0.0) {
      cur = std::abs(u.u.value(z0));
      ++count;
    }
    for (int i = 0; i < nth; ++i) {
      double th = 2.0 * std::numbers::pi * i / nth;
      for (int j = 1; j <= ns; ++j) {
        double s = r * j / ns;
        if (!inside(s, th)) continue;
        ++count;
        double v = val(s, th);
        if (v > cur) {
          cur = v;
          cs = s;
          ct = th;
        }
      }
    }
    best.samples += count;
    best_s = cs;
    best_th = ct;
    best.value = std::max(cur, 0.0);
    if (prev >= 0.0 && std::abs(cur - prev) <= 1e-4 * std::max(cur, 1e-300)) break;
    prev = cur;
    nth *= 2;
    ns *= 2;
  }
  // Compass polish in polar coordinates, clipped to the closed ball.
  double hs = r / ns, ht = 2.0 * std::numbers::pi / nth;
  double s = best_s, th = best_th, v = best.value;
  while (ht > 1e-12 || hs > 1e-12 * r) {
    bool moved = false;
    const double cand[4][2] = {{s + hs, th}, {s - hs, th}, {s, th + ht}, {s, th - ht}};
    for (const auto& c : cand) {
      double cs2 = std::clamp(c[0], 0.0, r);
      if (!inside(cs2, c[1])) continue;
      double cv = val(cs2, c[1]);
      if (cv > v) {
        v = cv;
        s = cs2;
        th = c[1];
        moved = true;
      }
    }
    if (!moved) {
      hs *= 0.5;
      ht *= 0.5;
    }
  }
  best.value = v;
  best.argmax = z0 + s * Vec2{std::cos(th), std::sin(th)};
  return best;
}

ThreeSphereReport three_sphere_sup(const Probe& p, double r1, double r2, double r3,
                                   const MonotoneFit& fit) {
  check_three_radii(r1, r2, r3);
  const SolutionField& u = *p.field;
  const double M = field_M(u);
  const double sM = std::sqrt(M);
  ThreeSphereReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.r3 = r3;
  const double rho = (r2 + r3) / 3.0, mid = 2.0 * (r2 + r3) / 3.0;
  TraceConstants tc = trace_constants(p, r1, r3, fit.C2, M);
  rep.Cbar = tc.Cbar;
  rep.CO = tc.CO;
  rep.a = std::log(r3 / mid);
  rep.b = rep.Cbar * rep.Cbar * std::log(mid / r1);
  rep.Cprime = fit.C2 * (rep.Cbar + 1.0) / rep.Cbar + 2.0;
  // max over x >= 0 of (n/2) log(1+x)/sqrt(x) by golden section on log x.
  {
    auto g = [](double lx) {
      double x = std::exp(lx);
      return 0.5 * kDim * std::log1p(x) / std::sqrt(x);
    };
    double lo = -5.0, hi = 5.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 200; ++i) {
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      if (g(m1) < g(m2)) lo = m1;
      else hi = m2;
    }
    rep.Cstar = g(0.5 * (lo + hi));
  }
  rep.sup1 = sup_norm(u, p.z0, r1).value;
  rep.sup2 = sup_norm(u, p.z0, r2).value;
  rep.sup3 = sup_norm(u, p.z0, r3).value;
  if (!(rep.sup1 > 0.0)) throw DomainError("three_sphere_sup: u vanishes on the inner ball");

  Probe p0 = p;
  double h1 = plain_height(p0, r1), hrho = plain_height(p0, rho), h3 = plain_height(p0, r3);
  const double w = rep.a + rep.b;
  double Ch = std::max(0.0, std::log(hrho) - (rep.b * std::log(h3) + rep.a * std::log(h1)) / w -
                                rep.Cprime * sM * rep.a);
  // sup |V| over sampled points of the outer ball.
  double Vinf = 0.0;
  Rng rng(0);
  for (int i = 0; i < 2000; ++i) {
    double s = r3 * std::sqrt(rng.uniform()), th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Vec2 x = p.z0 + s * Vec2{std::cos(th), std::sin(th)};
    if (u.region.level(x) <= 0.0) Vinf = std::max(Vinf, std::abs(u.potential.V(x)));
  }
  const double half_n = 0.5 * kDim;
  rep.bridge = rep.sup2 * std::pow(rho - r2, half_n) /
               (std::pow(1.0 + Vinf, half_n) * std::sqrt(hrho));
  double rhs0 = std::exp(rep.Cstar * sM) * std::pow(r3 / (r3 - 2.0 * r2), half_n) *
                std::pow(r3 / mid, rep.Cprime * sM) * std::pow(rep.sup3, rep.b / w) *
                std::pow(rep.sup1, rep.a / w);
  rep.C_needed = rep.sup2 / rhs0;
  rep.C_pred = rep.bridge * std::pow(3.0, half_n) *
               std::sqrt(std::numbers::pi / p.coeff->lambda) * std::exp(0.5 * Ch);
  rep.C = Ch;
  rep.lhs = rep.sup2;
  rep.rhs = rep.C_pred * rhs0;
  rep.pass = std::isfinite(rep.rhs) && rep.C_needed <= rep.C_pred * (1.0 + 1e-6);
  return rep;
}

// ---------------------------------------------------------------- growth step

double growth_factor_limit(double K1, double k) {
  double a = K1 > 0 ? 1.0 / (24.0 * K1) : HUGE_VAL;
  return std::min(a, 1.0 / (64.0 * k));
}

double growth_factor(double y, double K1, double k) {
  if (!(y >= 0.0) || y > growth_factor_limit(K1, k) * (1.0 + 1e-12))
    throw DomainError("growth_factor: argument outside [0, C~]");
  double num = std::log((1.0 + 4.0 * K1 * y) * (2.0 + 16.0 * k * y) /
                        ((1.0 - 4.0 * K1 * y) * (1.0 - 16.0 * k * y)));
  double den = std::log((1.0 - 4.0 * K1 * y) * (2.0 - 8.0 * k * y) /
                        ((1.0 + 4.0 * K1 * y) * (1.0 + 8.0 * k * y)));
  return num / den;
}

double growth_factor_slope(double K1, double k, int n) {
  const double end = growth_factor_limit(K1, k);
  double slope = 0.0, prev = growth_factor(0.0, K1, k);
  for (int j = 1; j <= n; ++j) {
    double f = growth_factor(end * j / n, K1, k);
    slope = std::max(slope, std::abs(f - prev) / (end / n));
    prev = f;
  }
  return slope;
}

GrowthReport growth_step(const SolutionField& u, const CoefficientField& A, const DiniDomain& d,
                         double r, const GrowthOptions& opts) {
  if (frob_norm(A({0.0, 0.0}) - Mat2::identity()) > 1e-12)
    throw DomainError("growth_step needs A(0) = I at the boundary anchor");
  GrowthReport rep;
  rep.r = r;
  rep.lambda = d.lambda_of(r);
  rep.f = growth_factor(rep.lambda, d.K1(), d.k());
  rep.C = opts.C;
  rep.C1 = opts.C1;
  rep.tol = std::max(opts.tol, u.quad_tol);
  const double M = field_M(u), sM = std::sqrt(M);
  const double alpha = default_alpha(u);
  Probe p = make_probe(u, A, {0.0, 0.0}, alpha);
  rep.G4 = plain_G(p, r / 4.0);
  rep.G2 = plain_G(p, r / 2.0);
  rep.G1 = plain_G(p, r);
  if (!(rep.G4 > 1e-300 && rep.G2 > 1e-300 && rep.G1 > 1e-300)) {
    rep.pass = false;
    rep.witnesses.push_back({"G underflow", rep.G4, 1e-300, false});
    return rep;
  }
  rep.lhs = std::log(rep.G2 / rep.G4);
  double prop = std::exp(opts.C1 * r) * rep.f * std::log(rep.G1 / rep.G2);
  rep.rhs = opts.C * sM * r + prop;
  rep.C_needed = std::max(0.0, (rep.lhs - prop) / (sM * r));
  rep.pass = rep.lhs <= rep.rhs + rep.tol * std::abs(rep.rhs);
  if (!opts.witnesses) return rep;

  // Shifted functionals in the frame centred at y0 = (0, -a).
  const double a = 4.0 * (rep.lambda * r);
  const double k = d.k(), K1 = d.K1();
  const double l1 = 1.0 - K1 * a, l2 = 1.0 + K1 * a;
  const double rr[3] = {(r / 4 - k * a) / l2, (r / 2 + k * a) / l1, (r - k * a) / l2};
  const double rp[3] = {(r / 4 - k * a / 2) / l2, (r / 2 + k * a / 2) / l1,
                        (r - k * a / 2) / l2};
  const Vec2 y0{0.0, -a};
  NormalizationFrame fr = make_frame(A, y0);
  CoefficientField Ay = push_matrix(A, fr);
  SolutionField uy = push_solution(u, fr, A.lambda);
  const Vec2 pprime = fr.forward({0.0, 0.0});
  Probe q = make_probe(uy, Ay, {0.0, 0.0}, alpha);
  Probe qs = make_probe(uy, Ay, pprime, alpha);
  qs.waive_normalization = true;
  for (int i = 0; i < 3; ++i) {
    std::ostringstream os;
    os << "H_y0(r" << (i + 1) << ")";
    rep.witnesses.push_back({os.str(), height(q, rr[i]), 0.0, true});
  }
  double Gy1 = plain_G(q, rr[0]), Gy2 = plain_G(q, rr[1]), Gy3 = plain_G(q, rr[2]);
  double L1 = plain_G(qs, rp[0]), L2 = plain_G(qs, rp[1]), L3 = plain_G(qs, rp[2]);
  auto le = [&](const std::string& n, double lhs, double rhs) {
    rep.witnesses.push_back({n, lhs, rhs, lhs <= rhs * (1.0 + rep.tol)});
  };
  le("L(r'2) <= H~(r2)", L2, Gy2);
  le("H~(r1) <= L(r'1)", Gy1, L1);
  le("H~(r3) <= L(r'3)", Gy3, L3);
  for (const auto& w : rep.witnesses) rep.pass = rep.pass && w.pass;
  return rep;
}

// ---------------------------------------------------------------- dyadic iteration

OrderEstimate dyadic_iteration(const Probe& p, double r0, int q_max, const DiniDomain* d,
                               double c2) {
  if (!(r0 > 0.0)) throw DomainError("dyadic_iteration: r0 must be positive");
  if (q_max < 3) throw DomainError("dyadic_iteration: q_max must be at least 3");
  OrderEstimate est;
  est.anchor = p.z0;
  est.r0 = r0;
  est.alpha = p.alpha;
  est.M = field_M(*p.field);
  for (int q = 0; q <= q_max; ++q) {
    double s = std::ldexp(r0, -q);
    double G = plain_G(p, s);
    if (!(G > 1e-300) || !std::isfinite(G)) break;
    est.radii.push_back(s);
    est.G.push_back(G);
  }
  if (est.G.size() < 4) throw NumericError("dyadic_iteration: fewer than 4 usable scales");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < est.G.size(); ++i) {
    lx.push_back(std::log(est.radii[i]));
    ly.push_back(std::log(est.G[i]));
  }
  LineFit f = least_squares(lx, ly);
  est.slope = f.slope;
  est.intercept = f.intercept;
  est.residual = f.rms;
  est.fitted_order = (f.slope - kDim - 2.0 * p.alpha) / 2.0;
  const double sM = std::sqrt(est.M);
  for (size_t i = 0; i + 1 < est.G.size(); ++i)
    est.Cbar_fit = std::max(est.Cbar_fit, std::log(est.G[i] / est.G[i + 1]) / sM);
  if (d) {
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += d->lambda_sampled(std::ldexp(r0, -i));
    est.K0 = std::exp(c2 * sum);
  }
  est.ratio = est.fitted_order / (1.0 + sM);
  est.pass = std::isfinite(est.fitted_order);
  return est;
}

ScanReport order_vs_M_scan(const std::vector<CatalogEntry>& family, int q_max) {
  ScanReport rep;
  for (const auto& e : family) {
    Probe p = make_probe(e.field, e.coeff, e.anchor, default_alpha(e.field));
    OrderEstimate est = dyadic_iteration(p, e.r0, q_max);
    ScanRow row;
    row.name = e.name;
    row.kappa = e.kappa;
    row.M = est.M;
    row.sqrtM = std::sqrt(est.M);
    row.fitted_order = est.fitted_order;
    row.ratio = est.ratio;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

SmallSup small_sup_bound(const SolutionField& u, Vec2 x0, double r0) {
  if (!(r0 > 0.0 && r0 <= 4.0)) throw DomainError("small_sup_bound: r0 must lie in (0, 4]");
  SmallSup out;
  out.normalizer = sup_norm(u, x0, 1.0).value;
  if (!(out.normalizer > 0.0)) throw DomainError("small_sup_bound: u vanishes on B_1");
  out.eps = sup_norm(u, x0, r0 / 4.0).value / out.normalizer;
  return out;
}

SmallSupFit fit_small_sup(const std::vector<std::pair<double, double>>& M_eps) {
  if (M_eps.size() < 2) throw DomainError("fit_small_sup needs at least two points");
  std::vector<double> x, y;
  for (auto [M, e] : M_eps) {
    if (!(e > 0.0)) throw DomainError("fit_small_sup: eps must be positive");
    x.push_back(std::sqrt(std::max(1.0, M)) + 1.0);
    y.push_back(std::log(e));
  }
  LineFit f = least_squares(x, y);
  SmallSupFit out;
  out.L2 = std::max(0.0, -f.slope);
  out.L1 = HUGE_VAL;
  for (size_t i = 0; i < x.size(); ++i) out.L1 = std::min(out.L1, std::exp(y[i] + out.L2 * x[i]));
  return out;
}

// ---------------------------------------------------------------- constants ledger

namespace {

struct CheckAcc {
  std::string display;
  double worst = HUGE_VAL;
  double r = 0.0;
  void add(double margin, double rr) {
    if (margin < worst) {
      worst = margin;
      r = rr;
    }
  }
};

std::vector<Vec2> ball_points(Vec2 c, double rad, int n, Rng& rng) {
  std::vector<Vec2> pts{c};
  for (int i = 0; i < n; ++i) {
    double s = rad * std::sqrt(rng.uniform()), th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    pts.push_back(c + s * Vec2{std::cos(th), std::sin(th)});
  }
  for (int i = 0; i < 64; ++i) {
    double th = 2.0 * std::numbers::pi * i / 64;
    pts.push_back(c + rad * Vec2{std::cos(th), std::sin(th)});
  }
  return pts;
}

std::vector<Vec2> circle_points(Vec2 c, double rad, int n) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * std::numbers::pi * i / n;
    pts.push_back(c + rad * Vec2{std::cos(th), std::sin(th)});
  }
  return pts;
}

Mat2 rotation(double t) { return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}; }

}  // namespace

ConstantsLedger constants_ledger(double lambda, double K, const BoundaryChart& chart,
                                 unsigned long long seed, int points_per_ball) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in (0, 1]");
  if (!(K >= 0.0)) throw DomainError("K must be nonnegative");
  ConstantsLedger L;
  L.lambda = lambda;
  L.K = K;
  L.K1 = std::pow(lambda, -1.5) * K;
  L.K2 = 1.0 + L.K1;
  L.k = k_constant(L.K1);
  DiniDomain d(chart, L.K1);
  L.R0_effective = d.R0_effective();
  L.lambda_R0 = d.lambda_of(L.R0_effective);
  L.cap = d.cap();
  L.binding = d.binding_constraint();
  L.c2 = 2056.0 * (1.0 + L.K1);

  std::vector<CheckAcc> acc;
  auto slot = [&](const std::string& name) -> CheckAcc& {
    for (auto& c : acc)
      if (c.display == name) return c;
    acc.push_back({name});
    return acc.back();
  };
  slot("fr3").add(L.cap - L.lambda_R0, L.R0_effective);

  // f on [0, C~]: f(0) = 1 and 0 <= f <= e^{c2 y} with c2 the max grid slope.
  L.Ctilde = growth_factor_limit(L.K1, L.k);
  {
    const int n = 1000;
    std::vector<double> y(n + 1), f(n + 1);
    for (int j = 0; j <= n; ++j) {
      y[j] = L.Ctilde * j / n;
      f[j] = growth_factor(y[j], L.K1, L.k);
    }
    const double slope = growth_factor_slope(L.K1, L.k, n);
    L.f_slope = slope;
    slot("f(0)=1").add(-std::abs(f[0] - 1.0) + 1e-15, 0.0);
    for (int j = 0; j <= n; ++j) {
      slot("f>=0").add(f[j], y[j]);
      slot("f<=exp(c2 y)").add(std::exp(slope * y[j]) * (1.0 + 1e-12) - f[j], y[j]);
    }
  }
  {
    double r0 = L.R0_effective / 4.0, sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += d.lambda_sampled(std::ldexp(r0, -i));
    L.K0 = std::exp(L.f_slope * sum);
  }

  Rng rng(seed);
  for (int i = 0; i < 16; ++i) L.radii.push_back(L.R0_effective * std::pow(10.0, -3.0 * i / 15.0));
  const double k = L.k, K1 = L.K1;
  for (size_t ir = 0; ir < L.radii.size(); ++ir) {
    const double r = L.radii[ir];
    const double lam = d.lambda_of(r);
    const double a = 4.0 * (lam * r);
    const double l1 = 1.0 - K1 * a, l2 = 1.0 + K1 * a;
    const double r1 = (r / 4 - k * a) / l2, r2 = (r / 2 + k * a) / l1, r3 = (r - k * a) / l2;
    const double p1 = (r / 4 - k * a / 2) / l2, p2 = (r / 2 + k * a / 2) / l1,
                 p3 = (r - k * a / 2) / l2;
    const double q1 = r / 4 - k * a / 2, q3 = r - k * a / 2;
    const double t1 = r / 4 - k * a / 3, t2 = (r / 2 + k * a / 3) / l1, t3 = r - k * a / 3;
    const double sm = r / 2 + k * a / 3;
    if (ir == 0) {
      const double ch[4][3] = {{r1, r2, r3}, {p1, p2, p3}, {q1, r / 2 + k * a / 2, q3}, {t1, t2, t3}};
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y) L.chain[x][y] = ch[x][y];
    }
    const double sq = r * r;
    slot("ordering").add(std::min({r1, r2 - r1, r3 - r2, l1 * (r - a) - r3}) / r, r);
    slot("rs").add(std::min({r2 / r1 - L.c1, L.c2 - r2 / r1, r3 / r2 - L.c3, L.c4 - r3 / r2}), r);

    // Admissible perturbations B with |B| <= K1 a.
    std::vector<Mat2> Bs;
    const double b = K1 * a;
    Bs.push_back(Mat2{});
    if (b > 0.0) {
      Bs.push_back(b * Mat2::identity());
      Bs.push_back(-b * Mat2::identity());
      for (double t : {0.0, std::numbers::pi / 4, std::numbers::pi / 3}) {
        Mat2 R = rotation(t);
        Bs.push_back(R * Mat2::diag(b, -b) * R.transpose());
      }
      for (int j = 0; j < 3; ++j) {
        Mat2 m{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double nm = op_norm(m);
        if (nm > 0) Bs.push_back((b / nm) * m);
      }
    }
    for (const Mat2& B : Bs) {
      const Mat2 IB = Mat2::identity() + B;
      const Mat2 IBinv = IB.inverse();
      const Vec2 pp = IB * Vec2{0.0, a};
      auto T = [&](Vec2 x) { return pp + IB * x; };
      slot("|p'|<=K2 a").add((L.K2 * a - norm(pp)) / r, r);
      // Implications on the stated balls.
      for (Vec2 y : ball_points(pp, p2, points_per_ball, rng))
        slot("A1").add(((r2 * r2 - norm2(y)) - (p2 * p2 - norm2(y - pp))) / sq, r);
      for (Vec2 y : ball_points({0, 0}, r1, points_per_ball, rng))
        slot("A2").add(((p1 * p1 - norm2(y - pp)) - (r1 * r1 - norm2(y))) / sq, r);
      for (Vec2 y : ball_points({0, 0}, r3, points_per_ball, rng))
        slot("A3").add(((p3 * p3 - norm2(y - pp)) - (r3 * r3 - norm2(y))) / sq, r);
      slot("incl").add(std::min({r2 - (norm(pp) + p2), p1 - (norm(pp) + r1), p3 - (norm(pp) + r3)}) / r, r);
      for (Vec2 y : circle_points(pp, p1, 256)) slot("cont3").add((q1 - norm(IBinv * (y - pp))) / r, r);
      for (Vec2 x : circle_points({0, 0}, sm, 256)) slot("cont3").add((t2 - norm(T(x) - pp)) / r, r);
      for (Vec2 y : circle_points(pp, p3, 256)) slot("cont3").add((q3 - norm(IBinv * (y - pp))) / r, r);
      const double c5 = r / 4 - k * a / 6, c7 = r - k * a / 6;
      for (Vec2 x : ball_points({0, 0}, q1, points_per_ball, rng)) {
        double tx = norm2(T(x) - pp);
        slot("cv5").add(((c5 * c5 - norm2(x)) - (t1 * t1 - tx)) / sq, r);
        slot("weights>=0").add((t1 - std::sqrt(tx)) / r, r);
      }
      for (Vec2 x : ball_points({0, 0}, sm, points_per_ball, rng)) {
        double tx = norm2(T(x) - pp);
        slot("cv6").add(((p2 * p2 - tx) - (sm * sm - norm2(x))) / sq, r);
        slot("weights>=0").add((p2 - std::sqrt(tx)) / r, r);
      }
      for (Vec2 x : ball_points({0, 0}, q3, points_per_ball, rng)) {
        double tx = norm2(T(x) - pp);
        slot("cv7").add(((c7 * c7 - norm2(x)) - (t3 * t3 - tx)) / sq, r);
        slot("weights>=0").add((t3 - std::sqrt(tx)) / r, r);
      }
    }
  }
  L.pass = true;
  for (const auto& c : acc) {
    // Margins are relative; allow rounding at the 1e-12 level.
    bool ok = c.worst >= -1e-12;
    L.checks.push_back({c.display, c.r, c.worst, ok});
    L.pass = L.pass && ok;
  }
  for (const auto& c : L.checks) {
    if (!c.pass) {
      std::ostringstream os;
      os << "constants ledger: display " << c.display << " fails at r=" << c.r
         << " (margin " << c.worst << ")";
      throw NumericError(os.str());
    }
  }
  return L;
}

}  // namespace dini
