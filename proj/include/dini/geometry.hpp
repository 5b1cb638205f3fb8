#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dini/coefficients.hpp"
#include "dini/linalg.hpp"

namespace dini {

// Modulus of continuity psi for the boundary gradient.
struct DiniModulus {
  enum class Kind { flat, power, log_power, custom };
  Kind kind = Kind::flat;
  double beta = 1.0;   // power: psi = scale * r^beta
  double delta = 1.0;  // log_power: psi = scale * log(2e/r)^{-(1+delta)}
  double scale = 1.0;
  // custom: (r, psi) with r increasing, psi nondecreasing; linear in log r.
  std::vector<std::pair<double, double>> table;
  double R0_cap = 1.0;

  double psi(double r) const;
  std::string kind_name() const;
};

DiniModulus flat_modulus();
DiniModulus power_modulus(double beta, double scale = 1.0);
DiniModulus log_power_modulus(double delta, double scale = 1.0);
DiniModulus custom_modulus(std::vector<std::pair<double, double>> table);

// Integral of psi(r)/r over [eps, upper].
double dini_integral(const DiniModulus& m, double eps, double upper);
// eps -> 0 limit (closed form for every kind).
double dini_integral_limit(const DiniModulus& m, double upper);

// Omega is locally {x2 < phi(x1)} with phi(0) = 0, phi'(0) = 0.
struct BoundaryChart {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  DiniModulus modulus;
  double R0 = 0.5;
};

BoundaryChart flat_chart(double R0 = 1.0);
// phi' = sign(x) psi(|x|) / 2, which has modulus psi for concave psi.
BoundaryChart chart_from_modulus(const DiniModulus& m, double R0);
// phi = c |x|^p with the matching power modulus (scale c p 2^{2-p}, beta p-1).
BoundaryChart power_graph_chart(double c, double p, double R0);

struct ChartCheck {
  double max_modulus_ratio = 0.0;  // max |phi'(a)-phi'(b)| / psi(|a-b|)
  double max_slope_factor = 0.0;   // max sqrt(1+phi'^2)
  bool normalized = false;         // phi(0) = 0 and phi'(0) = 0
  bool pass = false;
};
ChartCheck check_chart(const BoundaryChart& chart, int pairs, unsigned long long seed);

// Outward unit normal at (x', phi(x')).
Vec2 normal_at(const BoundaryChart& chart, double xprime);

// k = 8 K2 (K2/K1 + 3), with K1 floored at 1/2 (the minimizer of k).
double k_constant(double K1);
// min{1/(24 K1 + 64 k), 1/1000}
double lambda_cap(double K1);

class DiniDomain {
 public:
  explicit DiniDomain(BoundaryChart chart, double K1 = 0.0);

  const BoundaryChart& chart() const { return chart_; }
  // Normal-oscillation majorant; requires 0 < r <= R0_effective.
  double lambda_of(double r) const;
  // Same construction without the R0_effective restriction (r <= 0.95 R0).
  double lambda_sampled(double r) const;
  double R0_effective() const { return R0_eff_; }
  const std::string& binding_constraint() const { return binding_; }
  double K1() const { return K1_; }
  double k() const { return k_; }
  double cap() const { return cap_; }
  double sample_limit() const { return 0.95 * chart_.R0; }

  // x' interval of boundary points inside the closed ball B_r(0).
  std::pair<double, double> boundary_extent(double r) const;
  // Raw sampled oscillation at one radius (no floor, no rearrangement).
  double sampled_oscillation(double r, int samples = 512) const;

  const std::vector<double>& cache_scales() const { return scales_; }

 private:
  BoundaryChart chart_;
  double K1_, k_, cap_;
  std::vector<double> scales_;  // decreasing
  std::vector<double> dev_;     // rearranged oscillation at each scale
  double R0_eff_ = 0.0;
  std::string binding_;
};

// y0 = (0, -4 Lambda(r) r).
Vec2 interior_anchor(const DiniDomain& d, double r);

struct MarginReport {
  double min = 0.0, max = 0.0;
  bool pass = false;
  int samples_used = 0;
};
// <x - y0, nu(x)> / (r Lambda(r)) over boundary samples in B_r.
MarginReport star_shape_margin(const DiniDomain& d, double r, int samples);
// Same evaluation with a caller-supplied Lambda value; only requires r inside the
// sampling limit.  Used to probe radii above R0_effective.
MarginReport star_shape_margin_at(const DiniDomain& d, double r, double lambda_r, int samples);

struct GeneralizedMargin {
  double min = 0.0;
  double scale = 0.0;
  bool pass = false;
  int samples_used = 0;
};
// min <A_{y0}(y) y, N~(y)> over transformed boundary samples in B_{sqrt(lambda)(r-a)}.
GeneralizedMargin generalized_star_margin(const DiniDomain& d, const CoefficientField& coeff,
                                          double r, int samples);

}  // namespace dini
