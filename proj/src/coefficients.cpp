#include "dini/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dini {

namespace {

double ellipticity_of(const Mat2& a) {
  const SymEig2 e = sym_eig(a);
  return std::min({1.0, e.lo, 1.0 / e.hi});
}

}  // namespace

CoefficientField identity_coefficients() {
  return {"identity", [](Vec2) { return Mat2::identity(); }, 1.0, 0.0};
}

CoefficientField constant_coefficients(const Mat2& a, std::string name) {
  if (std::abs(a.a12 - a.a21) > 1e-14 * (1.0 + frob_norm(a)))
    throw DomainError("coefficient matrix is not symmetric");
  const SymEig2 e = sym_eig(a);
  if (!(e.lo > 0.0)) throw DomainError("coefficient matrix is not positive definite");
  return {std::move(name), [a](Vec2) { return a; }, ellipticity_of(a), 0.0};
}

CoefficientField diag_coefficients(double d1, double d2) {
  std::ostringstream os;
  os << "diag(" << d1 << "," << d2 << ")";
  return constant_coefficients(Mat2::diag(d1, d2), os.str());
}

CoefficientField affine_perturbation(double eps, const Mat2& E, double window) {
  if (std::abs(E.a12 - E.a21) > 1e-14) throw DomainError("perturbation matrix must be symmetric");
  const double c = std::abs(eps) * window * op_norm(E);
  if (!(c < 1.0)) throw DomainError("perturbation too large for the window: loses ellipticity");
  CoefficientField f;
  f.name = "affine_perturbation";
  f.A = [eps, E](Vec2 x) { return Mat2::identity() + (eps * x.x) * E; };
  f.lambda = std::min(1.0 - c, 1.0 / (1.0 + c));
  f.K = std::abs(eps) * op_norm(E);
  return f;
}

Potential zero_potential() {
  return {[](Vec2) { return 0.0; }, [](Vec2) { return Vec2{0.0, 0.0}; }, 1.0};
}

Potential constant_potential(double value) {
  return {[value](Vec2) { return value; }, [](Vec2) { return Vec2{0.0, 0.0}; },
          std::max(1.0, std::abs(value))};
}

Mat2 sqrt_spd(const Mat2& m) {
  const double scale = frob_norm(m);
  if (!std::isfinite(scale)) throw DomainError("sqrt_spd: non-finite input");
  if (std::abs(m.a12 - m.a21) > 1e-14 * scale)
    throw DomainError("sqrt_spd: matrix is not symmetric");
  const SymEig2 e = sym_eig(m);
  if (!(e.lo > 0.0)) {
    std::ostringstream os;
    os << "sqrt_spd: matrix is not positive definite (smallest eigenvalue " << e.lo << ")";
    throw DomainError(os.str());
  }
  // R = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det)), exact for 2x2 SPD.
  const double s = std::sqrt(e.lo * e.hi);
  const double t = std::sqrt(e.lo + e.hi + 2.0 * s);
  const double off = 0.5 * (m.a12 + m.a21);
  return {(m.a11 + s) / t, off / t, off / t, (m.a22 + s) / t};
}

NormalizationFrame make_frame(const CoefficientField& coeff, Vec2 z0) {
  const Mat2 a = coeff(z0);
  NormalizationFrame f;
  f.z0 = z0;
  f.S = sqrt_spd(a);
  f.Sinv = sqrt_spd(a.inverse());
  f.lambda_z0 = ellipticity_of(a);
  return f;
}

CoefficientField push_matrix(const CoefficientField& coeff, const NormalizationFrame& frame) {
  CoefficientField out;
  out.name = coeff.name + "@frame";
  const auto A = coeff.A;
  const NormalizationFrame fr = frame;
  out.A = [A, fr](Vec2 y) {
    Mat2 m = fr.Sinv * A(fr.inverse(y)) * fr.Sinv;
    const double off = 0.5 * (m.a12 + m.a21);
    m.a12 = m.a21 = off;
    return m;
  };
  out.lambda = coeff.lambda * coeff.lambda;
  out.K = std::pow(coeff.lambda, -1.5) * coeff.K;
  return out;
}

ScalarField push_field(const ScalarField& u, const NormalizationFrame& frame) {
  const NormalizationFrame fr = frame;
  ScalarField out;
  const auto val = u.value;
  out.value = [val, fr](Vec2 y) { return val(fr.inverse(y)); };
  if (u.grad) {
    const auto g = u.grad;
    // D_y u(z0 + S y) = S^T Du = S Du
    out.grad = [g, fr](Vec2 y) { return fr.S * g(fr.inverse(y)); };
  }
  return out;
}

double pushed_potential_constant(double lambda) { return std::max(1.0, 1.0 / std::sqrt(lambda)); }

Potential push_potential(const Potential& V, const NormalizationFrame& frame, double lambda) {
  const NormalizationFrame fr = frame;
  Potential out;
  const auto v = V.V;
  out.V = [v, fr](Vec2 y) { return v(fr.inverse(y)); };
  if (V.dV) {
    const auto dv = V.dV;
    out.dV = [dv, fr](Vec2 y) { return fr.S * dv(fr.inverse(y)); };
  }
  out.M = pushed_potential_constant(lambda) * V.M;
  return out;
}

double mu(const CoefficientField& coeff, Vec2 z0, Vec2 x) {
  const Vec2 d = x - z0;
  const double r2 = norm2(d);
  if (r2 == 0.0) {
    const Mat2 a = coeff(z0);
    if (frob_norm(a - Mat2::identity()) <= 1e-12) return 1.0;
    throw DomainError("mu at the center requires A(z0) = I: evaluate after normalization");
  }
  return dot(coeff(x) * d, d) / r2;
}

Vec2 z_field(const CoefficientField& coeff, Vec2 z0, Vec2 x) {
  const Vec2 d = x - z0;
  if (norm2(d) == 0.0) {
    mu(coeff, z0, x);  // raises unless normalized
    return {0.0, 0.0};
  }
  const Mat2 a = coeff(x);
  const Vec2 ad = a * d;
  return ad / (dot(ad, d) / norm2(d));
}

double div_z(const CoefficientField& coeff, Vec2 z0, Vec2 x, double h_rel) {
  const double h = h_rel * std::max(norm(x - z0), 1e-300);
  const Vec2 ex{h, 0.0}, ey{0.0, h};
  const double dzx = (z_field(coeff, z0, x + ex).x - z_field(coeff, z0, x - ex).x) / (2.0 * h);
  const double dzy = (z_field(coeff, z0, x + ey).y - z_field(coeff, z0, x - ey).y) / (2.0 * h);
  return dzx + dzy;
}

}  // namespace dini
