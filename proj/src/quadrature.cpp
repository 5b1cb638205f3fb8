#include "dini/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <limits>
#include <tuple>

#include "dini/numerics.hpp"

namespace dini {

namespace {

// Recurrence coefficients of the monic Jacobi polynomials on (-1,1) for the
// weight (1-x)^a (1+x)^b: diagonal alpha_k, squared off-diagonal beta_k.
void jacobi_recurrence(double a, double b, int m, std::vector<double>& diag,
                       std::vector<double>& off2) {
  diag.assign(m, 0.0);
  off2.assign(m > 0 ? m - 1 : 0, 0.0);
  const double ab = a + b;
  diag[0] = (b - a) / (ab + 2.0);
  for (int n = 1; n < m; ++n) {
    double s = 2.0 * n + ab;
    diag[n] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int n = 1; n < m; ++n) {
    double s = 2.0 * n + ab;
    double v;
    if (n == 1) {
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      v = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "gauss_jacobi: recurrence breakdown at n=" << n << " (alpha=" << a
         << ", beta=" << b << ")";
      throw NumericError(os.str());
    }
    off2[n - 1] = v;
  }
}

// Number of eigenvalues of the tridiagonal matrix below x (Sturm count).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x) {
  int cnt = 0;
  double q = d[0] - x;
  if (q < 0) ++cnt;
  for (size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = (d[i] - x) - e2[i - 1] / q;
    if (q < 0) ++cnt;
  }
  return cnt;
}

// Solve (T - shift I) y = rhs in place by Gaussian elimination with partial pivoting.
void tridiag_solve(const std::vector<double>& d0, const std::vector<double>& e, double shift,
                   std::vector<double>& rhs) {
  const size_t n = d0.size();
  std::vector<double> dl(e), d(n), du(e), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<char> swapped(n > 1 ? n - 1 : 0, 0);
  for (size_t i = 0; i < n; ++i) d[i] = d0[i] - shift;
  const double tiny = 1e-300;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      double t = du[i];
      du[i] = d[i + 1];
      d[i + 1] = t - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!swapped[i]) {
      rhs[i + 1] -= dl[i] * rhs[i];
    } else {
      double t = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = t - dl[i] * rhs[i];
    }
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (size_t k = n - 2; k-- > 0;)
    rhs[k] = (rhs[k] - du[k] * rhs[k + 1] - du2[k] * rhs[k + 2]) / d[k];
}

QuadRule build_jacobi(double alpha, double beta_exp, int m) {
  std::vector<double> d, e2;
  jacobi_recurrence(alpha, beta_exp, m, d, e2);
  std::vector<double> e(e2.size());
  for (size_t i = 0; i < e2.size(); ++i) e[i] = std::sqrt(e2[i]);

  // Gershgorin interval.
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (int i = 0; i < m; ++i) {
    double rad = (i > 0 ? e[i - 1] : 0.0) + (i + 1 < m ? e[i] : 0.0);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }

  // Beta(alpha+1, beta+1): total mass of the weight on (0,1).
  const double mass = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta_exp + 1.0) -
                               std::lgamma(alpha + beta_exp + 2.0));
  QuadRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(d, e2, mid) > k) b = mid;
      else a = mid;
    }
    double x = 0.5 * (a + b);
    double v0;
    if (m == 1) {
      v0 = 1.0;
    } else {
      std::vector<double> v(m, 1.0);
      double shift = x + 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
      for (int it = 0; it < 3; ++it) {
        tridiag_solve(d, e, shift, v);
        double nv = 0.0;
        for (double c : v) nv += c * c;
        nv = std::sqrt(nv);
        if (!(nv > 0.0) || !std::isfinite(nv))
          throw NumericError("gauss_jacobi: inverse iteration failed");
        for (double& c : v) c /= nv;
      }
      v0 = v[0];
    }
    rule.nodes[k] = 0.5 * (1.0 + x);
    rule.weights[k] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_jacobi(double alpha, double beta_exp, int m) {
  if (m < 1) throw DomainError("gauss_jacobi: m must be >= 1");
  if (!(alpha > -1.0) || !(beta_exp > -1.0))
    throw DomainError("gauss_jacobi: exponents must exceed -1");
  static std::mutex mtx;
  static std::map<std::tuple<double, double, int>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(alpha, beta_exp, m);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<QuadRule>(build_jacobi(alpha, beta_exp, m));
  auto& ref = *rule;
  cache.emplace(key, std::move(rule));
  return ref;
}

const QuadRule& gauss_legendre(int m) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  const UnitRule& u = gauss_legendre_unit(m);
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<QuadRule>();
  for (int i = 0; i < m; ++i) {
    rule->nodes.push_back(0.5 * (1.0 + u.x[i]));
    rule->weights.push_back(0.5 * u.w[i]);
  }
  auto& ref = *rule;
  cache.emplace(m, std::move(rule));
  return ref;
}

Region whole_plane() {
  Region reg;
  reg.name = "plane";
  reg.level = [](Vec2) { return -1.0; };
  reg.boundary = [](Vec2, double, int) { return std::vector<BoundarySample>{}; };
  return reg;
}

Region half_plane_region() {
  Region reg;
  reg.name = "half_plane";
  reg.level = [](Vec2 x) { return x.y; };
  reg.boundary = [](Vec2 c, double r, int n) {
    std::vector<BoundarySample> out;
    if (std::abs(c.y) > r || n < 2) return out;
    double half = std::sqrt(std::max(0.0, r * r - c.y * c.y));
    for (int i = 0; i < n; ++i) {
      double x = c.x - half + 2.0 * half * i / (n - 1);
      out.push_back({{x, 0.0}, {0.0, 1.0}});
    }
    return out;
  };
  return reg;
}

Region disk_region(double radius) {
  Region reg;
  reg.name = "disk";
  reg.level = [radius](Vec2 x) { return norm(x) - radius; };
  reg.boundary = [radius](Vec2 c, double r, int n) {
    std::vector<BoundarySample> out;
    for (int i = 0; i < n; ++i) {
      double t = 2.0 * std::numbers::pi * i / n;
      Vec2 nu{std::cos(t), std::sin(t)};
      Vec2 p = radius * nu;
      if (norm(p - c) <= r) out.push_back({p, nu});
    }
    return out;
  };
  return reg;
}

namespace {

std::vector<BoundarySample> chart_samples(const BoundaryChart& chart, Vec2 c, double r, int n,
                                          double limit) {
  std::vector<BoundarySample> out;
  double lo = std::max(c.x - r, -limit), hi = std::min(c.x + r, limit);
  if (!(hi > lo) || n < 2) return out;
  for (int i = 0; i < n; ++i) {
    double xp = lo + (hi - lo) * i / (n - 1);
    Vec2 p{xp, chart.phi(xp)};
    if (norm(p - c) <= r) out.push_back({p, normal_at(chart, xp)});
  }
  return out;
}

}  // namespace

Region chart_region(const BoundaryChart& chart) {
  Region reg;
  reg.name = "chart:" + chart.name;
  const double R = chart.R0;
  reg.level = [chart, R](Vec2 x) { return x.y - chart.phi(std::clamp(x.x, -R, R)); };
  reg.boundary = [chart](Vec2 c, double r, int n) {
    return chart_samples(chart, c, r, n, 0.95 * chart.R0);
  };
  return reg;
}

Region chart_window_region(const BoundaryChart& chart, double half_width, double depth) {
  Region reg;
  reg.name = "chart_window:" + chart.name;
  const double R = chart.R0;
  reg.level = [chart, R, half_width, depth](Vec2 x) {
    double t = x.y - chart.phi(std::clamp(x.x, -R, R));
    return std::max({t, std::abs(x.x) - half_width, -depth - t});
  };
  reg.boundary = [chart, half_width](Vec2 c, double r, int n) {
    return chart_samples(chart, c, r, n, std::min(0.95 * chart.R0, half_width));
  };
  return reg;
}

std::vector<std::pair<double, double>> ray_segments(const Region& region, Vec2 z0, double theta,
                                                    double r) {
  constexpr int N = 64;
  const Vec2 e{std::cos(theta), std::sin(theta)};
  auto inside_at = [&](double s) { return region.level(z0 + s * e) < 0.0; };

  bool state[N + 1];
  for (int j = 0; j <= N; ++j) state[j] = inside_at(r * j / N);
  // A center on the boundary takes the state of the first step off it.
  if (region.level(z0) == 0.0) state[0] = state[1];

  int changes = 0;
  for (int j = 0; j < N; ++j)
    if (state[j] != state[j + 1]) ++changes;
  if (changes > 4) {
    std::ostringstream os;
    os << "ray_clip: " << changes << " boundary crossings on the ray at angle " << theta;
    throw NumericError(os.str());
  }

  std::vector<std::pair<double, double>> segs;
  double start = state[0] ? 0.0 : -1.0;
  for (int j = 0; j < N; ++j) {
    if (state[j] == state[j + 1]) continue;
    double a = r * j / N, b = r * (j + 1) / N;
    const bool sa = state[j];
    for (int it = 0; it < 200 && b - a > 1e-12 * r; ++it) {
      double m = 0.5 * (a + b);
      if (inside_at(m) == sa) a = m;
      else b = m;
    }
    double c = 0.5 * (a + b);
    if (sa) {
      segs.emplace_back(start, c);
      start = -1.0;
    } else {
      start = c;
    }
  }
  if (start >= 0.0) segs.emplace_back(start, r);
  return segs;
}

RayClip ray_clip(const Region& region, Vec2 z0, double theta, double r) {
  if (!(r > 0.0)) throw DomainError("ray_clip: radius must be positive");
  auto segs = ray_segments(region, z0, theta, r);
  RayClip out;
  if (segs.empty() || segs.front().first > 0.0) {
    out.rho_max = 0.0;
    out.clipped = true;
    return out;
  }
  out.rho_max = segs.front().second;
  out.clipped = out.rho_max < r;
  return out;
}

namespace {

void integrate_once(const BallIntegrand& f, const Region& region, Vec2 z0, double r, double alpha,
                    int angular, int radial, std::vector<double>& val,
                    std::vector<double>& absval) {
  const size_t K = f.extra_power.size();
  val.assign(K, 0.0);
  absval.assign(K, 0.0);
  const UnitRule& panel = gauss_legendre_unit(8);
  const int panels = std::max(1, angular / 8);
  const QuadRule& jac = gauss_jacobi(alpha, 0.0, radial);
  const QuadRule& leg = gauss_legendre(radial);
  const double r2 = r * r;
  const double full = 0.5 * std::pow(r, 2.0 * alpha + 2.0);

  std::vector<double> fv(K), ray(K), rayabs(K);
  const double dth = 2.0 * std::numbers::pi / panels;
  for (int p = 0; p < panels; ++p) {
    const double t0 = dth * p;
    for (size_t q = 0; q < panel.x.size(); ++q) {
      const double theta = t0 + 0.5 * dth * (1.0 + panel.x[q]);
      const double wth = 0.5 * dth * panel.w[q];
      const Vec2 e{std::cos(theta), std::sin(theta)};
      std::fill(ray.begin(), ray.end(), 0.0);
      std::fill(rayabs.begin(), rayabs.end(), 0.0);
      for (auto [s0, s1] : ray_segments(region, z0, theta, r)) {
        if (s1 >= r) {
          // Jacobi form in t = s^2/r^2 on [ta, 1].
          const double ta = (s0 / r) * (s0 / r);
          const double span = 1.0 - ta;
          const double pref = full * std::pow(span, alpha + 1.0);
          for (int i = 0; i < radial; ++i) {
            const double tau = jac.nodes[i];
            const double t = ta + span * tau;
            const Vec2 x = z0 + (r * std::sqrt(t)) * e;
            f.eval(x, fv.data());
            const double extra_base = r2 * span * (1.0 - tau);
            for (size_t k = 0; k < K; ++k) {
              const double w = pref * jac.weights[i] * std::pow(extra_base, f.extra_power[k]);
              ray[k] += w * fv[k];
              rayabs[k] += w * std::abs(fv[k]);
            }
          }
        } else {
          const double len = s1 - s0;
          for (int i = 0; i < radial; ++i) {
            const double s = s0 + len * leg.nodes[i];
            const Vec2 x = z0 + s * e;
            f.eval(x, fv.data());
            const double base = r2 - s * s;
            for (size_t k = 0; k < K; ++k) {
              const double w =
                  len * leg.weights[i] * s * std::pow(base, alpha + f.extra_power[k]);
              ray[k] += w * fv[k];
              rayabs[k] += w * std::abs(fv[k]);
            }
          }
        }
      }
      for (size_t k = 0; k < K; ++k) {
        val[k] += wth * ray[k];
        absval[k] += wth * rayabs[k];
      }
    }
  }
}

}  // namespace

BallResult integrate_ball_multi(const BallIntegrand& f, const Region& region, Vec2 z0, double r,
                                double alpha, const QuadOptions& opts) {
  if (!(alpha > -1.0)) throw DomainError("integrate_ball: alpha must exceed -1");
  if (!(r > 0.0)) throw DomainError("integrate_ball: radius must be positive");
  if (opts.angular < 8 || opts.radial < 1) throw DomainError("integrate_ball: resolution too small");
  BallResult res;
  int a = (opts.angular + 7) / 8 * 8, m = opts.radial;
  integrate_once(f, region, z0, r, alpha, a, m, res.values, res.abs_values);
  res.angular = a;
  res.radial = m;
  if (!opts.adaptive) return res;
  while (2 * a <= opts.max_angular && 2 * m <= opts.max_radial) {
    a *= 2;
    m *= 2;
    std::vector<double> v, av;
    integrate_once(f, region, z0, r, alpha, a, m, v, av);
    double change = 0.0;
    for (size_t k = 0; k < v.size(); ++k) {
      double scale = std::max({std::abs(v[k]), av[k], 1e-300});
      change = std::max(change, std::abs(v[k] - res.values[k]) / scale);
    }
    res.values = std::move(v);
    res.abs_values = std::move(av);
    res.angular = a;
    res.radial = m;
    res.rel_change = change;
    if (change <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

double integrate_ball(const std::function<double(Vec2)>& f, const Region& region, Vec2 z0,
                      double r, double alpha, const QuadOptions& opts) {
  BallIntegrand bi;
  bi.extra_power = {0};
  bi.eval = [&f](Vec2 x, double* out) { out[0] = f(x); };
  return integrate_ball_multi(bi, region, z0, r, alpha, opts).values[0];
}

}  // namespace dini
