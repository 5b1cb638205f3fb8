#pragma once

// Independent reference computations used to derive and freeze expected values.

#include <cmath>
#include <functional>

namespace oracle {

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 50) {
  auto step = [&](auto&& self, double a0, double b0, double fa, double fm, double fb, double whole,
                  double eps, int d) -> double {
    double m = 0.5 * (a0 + b0), lm = 0.5 * (a0 + m), rm = 0.5 * (m + b0);
    double flm = f(lm), frm = f(rm);
    double left = (m - a0) / 6 * (fa + 4 * flm + fm), right = (b0 - m) / 6 * (fm + 4 * frm + fb);
    double diff = left + right - whole;
    if (d <= 0 || std::abs(diff) <= 15 * eps) return left + right + diff / 15;
    return self(self, a0, m, fa, flm, fm, left, eps / 2, d - 1) +
           self(self, m, b0, fm, frm, fb, right, eps / 2, d - 1);
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return step(step, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

// Integral of u^2 (r^2-|x|^2)^alpha over {x2 < 0} for u = Im((x1 - i x2)^k):
// (1/2) r^{2k+2+2alpha} B(k+1, alpha+1) * int_0^pi sin^2(k t) dt.
inline double homogeneous_height(int k, double alpha, double r) {
  return 0.5 * std::pow(r, 2.0 * k + 2.0 + 2.0 * alpha) * std::beta(k + 1.0, alpha + 1.0) *
         (M_PI / 2.0);
}

// First positive zero bracket scan of std::cyl_bessel_j.
inline double bessel_zero(int n, int m) {
  double x = 0.1, step = 0.01, prev = std::cyl_bessel_j(n, x);
  int found = 0;
  while (true) {
    double y = std::cyl_bessel_j(n, x + step);
    if (prev * y < 0) {
      double a = x, b = x + step;
      for (int i = 0; i < 200; ++i) {
        double c = 0.5 * (a + b);
        if (std::cyl_bessel_j(n, a) * std::cyl_bessel_j(n, c) <= 0) b = c;
        else a = c;
      }
      if (++found == m) return 0.5 * (a + b);
    }
    prev = y;
    x += step;
  }
}

}  // namespace oracle
