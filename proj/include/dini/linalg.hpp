#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dini {

// Precondition or configuration problems (bad radius, non-SPD input, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures (non-convergence, underflow, indefinite systems).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const;
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
inline Mat2 operator*(double s, const Mat2& a) {
  return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
inline Vec2 operator*(const Mat2& a, Vec2 v) {
  return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
}

// Spectral norm.
double op_norm(const Mat2& a);
// Frobenius norm.
double frob_norm(const Mat2& a);

// Eigen-decomposition of a symmetric matrix; lo <= hi, v_lo/v_hi unit.
struct SymEig2 {
  double lo = 0.0, hi = 0.0;
  Vec2 v_lo, v_hi;
};
SymEig2 sym_eig(const Mat2& a);

}  // namespace dini
