#pragma once

#include <functional>
#include <string>

#include "dini/linalg.hpp"

namespace dini {

// Symmetric matrix field A(x) with ellipticity lambda and Lipschitz constant K.
struct CoefficientField {
  std::string name;
  std::function<Mat2(Vec2)> A;
  double lambda = 1.0;
  double K = 0.0;

  Mat2 operator()(Vec2 x) const { return A(x); }
};

CoefficientField identity_coefficients();
CoefficientField constant_coefficients(const Mat2& a, std::string name = "constant");
CoefficientField diag_coefficients(double d1, double d2);
// A(x) = I + eps * x1 * E for |x| <= window; E symmetric.
CoefficientField affine_perturbation(double eps, const Mat2& E, double window = 1.0);

// Scalar function with gradient.
struct ScalarField {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> grad;
};

// Zeroth-order term V with bound M >= max(1, |V|_{W^{1,inf}}).
struct Potential {
  std::function<double(Vec2)> V;
  std::function<Vec2(Vec2)> dV;
  double M = 1.0;
};

Potential zero_potential();
Potential constant_potential(double value);

struct NormalizationFrame {
  Vec2 z0;
  Mat2 S;     // A(z0)^{1/2}
  Mat2 Sinv;  // A(z0)^{-1/2}
  double lambda_z0 = 1.0;

  Vec2 forward(Vec2 x) const { return Sinv * (x - z0); }
  Vec2 inverse(Vec2 y) const { return z0 + S * y; }
};

// Unique SPD square root of a symmetric positive definite 2x2 matrix.
Mat2 sqrt_spd(const Mat2& m);

NormalizationFrame make_frame(const CoefficientField& coeff, Vec2 z0);

// A_{z0}(y) = S^{-1} A(z0 + S y) S^{-1}; ellipticity lambda^2, Lipschitz lambda^{-3/2} K.
CoefficientField push_matrix(const CoefficientField& coeff, const NormalizationFrame& frame);

ScalarField push_field(const ScalarField& u, const NormalizationFrame& frame);

// Constant in the pushed W^{1,inf} bound.
double pushed_potential_constant(double lambda);
Potential push_potential(const Potential& V, const NormalizationFrame& frame, double lambda);

// <A(x)(x-z0), x-z0> / |x-z0|^2.  At x == z0 only defined when A(z0) = I.
double mu(const CoefficientField& coeff, Vec2 z0, Vec2 x);

// A(x)(x-z0) / mu(x).
Vec2 z_field(const CoefficientField& coeff, Vec2 z0, Vec2 x);

// Central-difference divergence of z_field with step h = h_rel * |x - z0|.
double div_z(const CoefficientField& coeff, Vec2 z0, Vec2 x, double h_rel = 1e-5);

}  // namespace dini
