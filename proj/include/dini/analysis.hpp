#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dini/fields.hpp"
#include "dini/functionals.hpp"
#include "dini/geometry.hpp"

namespace dini {

struct MonotonicityReport {
  double M = 1.0;
  double C1 = 0.0, C2 = 0.0;
  double max_violation = 0.0;       // at the selected (C1, C2); <= 0 means monotone
  double violation_at_zero = 0.0;   // with C1 = C2 = 0
  bool pass = false;
  std::vector<std::pair<double, double>> pareto;  // (C1, minimal C2)
  int valid_radii = 0;
};

// Minimal constants making e^{C1 r}(N + C2 M r^2) nondecreasing on the trace.
MonotonicityReport fit_monotonicity(const FrequencyTrace& t, double M, double slack = 1e-8,
                                    double box = 1e3);

struct ThreeSphereReport {
  double r1 = 0, r2 = 0, r3 = 0;
  double a = 0, b = 0;  // exponents (alpha_0/beta_0 or alpha_1/beta_1)
  double Cbar = 1.0;
  double CO = 0.0;      // sup |O(1)| in the height identity
  double C = 0.0;       // additive constant used on the log scale
  double Cprime = 0.0;  // exponent constant (C' or C'')
  double Cstar = 0.0;
  double lhs = 0.0, rhs = 0.0;  // log scale for H, linear for sup norms
  double C_needed = 0.0;
  double C_pred = 0.0;  // sup-norm version: constant implied by fitted pieces
  double bridge = 0.0;  // fitted boundary L^inf-L^2 constant
  double sup1 = 0, sup2 = 0, sup3 = 0;
  bool pass = false;
};

struct MonotoneFit {
  double C1 = 0.0, C2 = 0.0;
};

ThreeSphereReport three_sphere_H(const Probe& p, double r1, double r2, double r3,
                                 const MonotoneFit& fit);
ThreeSphereReport three_sphere_sup(const Probe& p, double r1, double r2, double r3,
                                   const MonotoneFit& fit);

struct SupNorm {
  double value = 0.0;
  Vec2 argmax;
  int samples = 0;
};
// sup |u| over region and closed ball B_r(z0); polar sampling with doubling + polish.
SupNorm sup_norm(const SolutionField& u, Vec2 z0, double r);

// f(y) of the growth step and its domain end C~ = min(1/(24 K1), 1/(64 k)).
double growth_factor(double y, double K1, double k);
double growth_factor_limit(double K1, double k);
// Max secant slope of f on an (n+1)-point grid over [0, C~].
double growth_factor_slope(double K1, double k, int n = 1000);

struct GrowthWitness {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct GrowthReport {
  double r = 0.0, lambda = 0.0, f = 0.0;
  double G4 = 0, G2 = 0, G1 = 0;  // G(r/4), G(r/2), G(r)
  double lhs = 0.0, rhs = 0.0;
  double C = 0.0, C1 = 0.0;
  double C_needed = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<GrowthWitness> witnesses;
};

struct GrowthOptions {
  double C = 0.0;    // constant of the sqrt(M) r term
  double C1 = 0.0;   // monotonicity exponent
  double tol = 1e-9; // relative tolerance on the comparison
  bool witnesses = true;
};

// Growth step at a boundary anchor x0 = 0 with A(0) = I.
GrowthReport growth_step(const SolutionField& u, const CoefficientField& A,
                         const DiniDomain& d, double r, const GrowthOptions& opts = {});

struct OrderEstimate {
  Vec2 anchor;
  double r0 = 0.0;
  double alpha = 0.0, M = 1.0;
  std::vector<double> radii, G;
  double slope = 0.0, intercept = 0.0, residual = 0.0;
  double fitted_order = 0.0;
  double Cbar_fit = 0.0;  // max log-ratio / sqrt(M)
  double K0 = 1.0;
  double ratio = 0.0;     // fitted_order / (1 + sqrt M)
  bool pass = false;
};

// G at r0/2^q, q = 0..q_max, least-squares order; domain may be null (interior anchor).
OrderEstimate dyadic_iteration(const Probe& p, double r0, int q_max, const DiniDomain* d = nullptr,
                               double c2 = 0.0);

struct ScanRow {
  std::string name;
  int kappa = 0;
  double M = 1.0, sqrtM = 1.0, fitted_order = 0.0, ratio = 0.0;
};
struct ScanReport {
  std::vector<ScanRow> rows;
  double max_ratio = 0.0;
};
ScanReport order_vs_M_scan(const std::vector<CatalogEntry>& family, int q_max = 6);

struct SmallSup {
  double eps = 0.0;         // sup over B_{r0/4} after normalization
  double normalizer = 1.0;  // sup over B_1 used to rescale
};
SmallSup small_sup_bound(const SolutionField& u, Vec2 x0, double r0);

struct SmallSupFit {
  double L1 = 0.0, L2 = 0.0;
};
// eps_i >= L1 exp(-L2 (sqrt(M_i) + 1)); L2 from least squares, L1 the tightest valid.
SmallSupFit fit_small_sup(const std::vector<std::pair<double, double>>& M_eps);

struct LedgerCheck {
  std::string display;
  double r = 0.0;
  double worst = 0.0;  // most negative margin found (>= 0 passes)
  bool pass = false;
};

struct ConstantsLedger {
  int n = 2;
  double lambda = 1.0, K = 0.0, K1 = 0.0, K2 = 1.0, k = 0.0;
  double R0_effective = 0.0, lambda_R0 = 0.0, cap = 0.0;
  std::string binding;
  double c1 = 2.0, c2 = 0.0, c3 = 75.0 / 72.0, c4 = 2.0;
  double Ctilde = 0.0, f_slope = 0.0;  // f_slope: fitted c2 of the f-bound
  double K0 = 1.0;
  std::vector<double> radii;
  // Chains at R0_effective: (r1,r2,r3), (r'), (r''), (r''').
  double chain[4][3] = {};
  std::vector<LedgerCheck> checks;
  bool pass = false;
};

ConstantsLedger constants_ledger(double lambda, double K, const BoundaryChart& chart,
                                 unsigned long long seed = 0, int points_per_ball = 400);

}  // namespace dini
