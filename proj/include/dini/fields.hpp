#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dini/coefficients.hpp"
#include "dini/geometry.hpp"
#include "dini/linalg.hpp"
#include "dini/quadrature.hpp"

namespace dini {

struct SolutionField {
  enum class Kind { closed_form, grid };
  std::string name;
  Kind kind = Kind::closed_form;
  ScalarField u;
  Potential potential;
  Region region;
  std::function<Mat2(Vec2)> hessian;  // closed forms only; may be empty
  // Quadrature tolerance appropriate for this field.
  double quad_tol = 1e-9;
};

struct CatalogEntry {
  std::string name;
  SolutionField field;
  CoefficientField coeff;
  int kappa = 0;       // known vanishing order at the anchor
  Vec2 anchor;
  bool boundary_anchor = false;
  // Radius of the ball around the anchor on which the entry is posed.
  double window = 1.0;
  // Scale at which the anchor's local analysis starts (dyadic iteration r0).
  double r0 = 0.0;
};

// u = Im((x1 - i x2)^kappa) on {x2 < 0}; A = I, V = 0.
CatalogEntry catalog_homogeneous(int kappa);
// u = J_kappa(j_{kappa,m} s) sin(kappa theta) on the unit disk (cos(0) = 1 for kappa = 0).
CatalogEntry catalog_disk_eigen(int kappa, int m);
// u = 1 on the whole plane.
CatalogEntry catalog_constant();
// "imz_kappa{k}", "disk_eigen_k{k}_m{m}", "unit_constant".
CatalogEntry catalog_lookup(const std::string& name);

double bessel_j(int n, double x);
// J_n(x) / x^n, smooth in x.
double bessel_j_scaled(int n, double x);
// m-th positive zero of J_n (n <= 12, m <= 3).
double bessel_zero(int n, int m);

// Field composed with T^{-1}; region, potential and gradient transformed.
SolutionField push_solution(const SolutionField& u, const NormalizationFrame& frame,
                            double lambda);

// Nodal values on the strip grid xi = xi0 + i h, t = t0 + j h with t = x2 - phi(xi).
class GridField {
 public:
  GridField(int nx, int ny, double h, double xi0, double t0, std::vector<double> values,
            BoundaryChart chart);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double xi0() const { return xi0_; }
  double t0() const { return t0_; }
  const std::vector<double>& values() const { return values_; }
  const BoundaryChart& chart() const { return chart_; }
  double node(int i, int j) const { return values_[static_cast<size_t>(j) * (nx_ + 1) + i]; }

  double eval(Vec2 x) const;
  Vec2 grad(Vec2 x) const;

 private:
  int nx_, ny_;
  double h_, xi0_, t0_;
  std::vector<double> values_;
  std::vector<double> dxi_, dt_;  // nodal strip-coordinate derivatives
  BoundaryChart chart_;

  void locate(Vec2 x, int& i, int& j, double& fx, double& fy, double& dphi) const;
};

SolutionField grid_solution(std::shared_ptr<const GridField> grid, Potential potential,
                            std::string name);

struct FdProblem {
  BoundaryChart chart;
  double half_width = 0.5;  // |xi| <= half_width
  double depth = 0.5;       // -depth <= t <= 0
  double h = 1.0 / 64;
  CoefficientField coeff = identity_coefficients();
  Potential potential = zero_potential();
  // Dirichlet data on the three sides other than Gamma (t = 0), where u = 0.
  std::function<double(Vec2)> data;
};

struct FdOptions {
  double tol = 1e-10;
  int max_iter_factor = 10;
};

struct FdResult {
  std::shared_ptr<GridField> grid;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

FdResult fd_solve(const FdProblem& prob, const FdOptions& opts = {});

// Max nodal error against a reference function.
double grid_max_error(const GridField& g, const std::function<double(Vec2)>& exact);

}  // namespace dini
