#include "dini/numerics.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "dini/linalg.hpp"

namespace dini {

const UnitRule& gauss_legendre_unit(int m) {
  if (m < 1) throw DomainError("gauss_legendre: m must be >= 1");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<UnitRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;

  auto rule = std::make_unique<UnitRule>();
  rule->x.resize(m);
  rule->w.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton on P_m from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      if (m == 1) p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_m(x), p0 = P_{m-1}(x)
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    rule->x[m - 1 - i] = x;
    rule->w[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  auto& ref = *rule;
  cache.emplace(m, std::move(rule));
  return ref;
}

double bisect(const std::function<double(double)>& f, double a, double b, double tol,
              int max_iter) {
  double fa = f(a);
  if (fa == 0.0) return a;
  double fb = f(b);
  if (fb == 0.0) return b;
  if ((fa < 0) == (fb < 0)) throw NumericError("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter && b - a > tol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double integrate_dyadic(const std::function<double(double)>& f, double X, int levels) {
  if (X == 0.0) return 0.0;
  const UnitRule& gl = gauss_legendre_unit(8);
  double total = 0.0;
  double hi = X;
  for (int k = 0; k < levels; ++k) {
    double lo = 0.5 * hi;
    double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * f(c + h * gl.x[i]);
    total += h * s;
    hi = lo;
  }
  return total;
}

}  // namespace dini
