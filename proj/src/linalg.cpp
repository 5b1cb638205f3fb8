#include "dini/linalg.hpp"

#include <algorithm>

namespace dini {

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0 || !std::isfinite(d)) throw NumericError("singular 2x2 matrix");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double frob_norm(const Mat2& a) {
  return std::sqrt(a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 + a.a22 * a.a22);
}

double op_norm(const Mat2& a) {
  // sqrt of the largest eigenvalue of a^T a
  const Mat2 g = a.transpose() * a;
  return std::sqrt(std::max(0.0, sym_eig(g).hi));
}

SymEig2 sym_eig(const Mat2& a) {
  const double b = 0.5 * (a.a12 + a.a21);
  const double m = 0.5 * (a.a11 + a.a22);
  const double d = 0.5 * (a.a11 - a.a22);
  const double rad = std::hypot(d, b);
  SymEig2 e;
  e.lo = m - rad;
  e.hi = m + rad;
  if (rad == 0.0) {
    e.v_hi = {1.0, 0.0};
    e.v_lo = {0.0, 1.0};
    return e;
  }
  // angle of the top eigenvector
  const double th = 0.5 * std::atan2(b, d);
  e.v_hi = {std::cos(th), std::sin(th)};
  e.v_lo = {-std::sin(th), std::cos(th)};
  return e;
}

}  // namespace dini
