#pragma once

#include <string>
#include <vector>

#include "dini/coefficients.hpp"
#include "dini/fields.hpp"
#include "dini/quadrature.hpp"

namespace dini {

// Everything the weighted functionals need about one anchor.
struct Probe {
  const SolutionField* field = nullptr;
  const CoefficientField* coeff = nullptr;
  Vec2 z0;
  double alpha = 1.0;
  QuadOptions quad;
  // Skip the A(z0) = I check (caller vouches, e.g. A = I everywhere).
  bool waive_normalization = false;
};

Probe make_probe(const SolutionField& u, const CoefficientField& A, Vec2 z0, double alpha);
// sqrt(M) with M floored at 1.
double default_alpha(const SolutionField& u);

struct HeightEnergy {
  double H = 0.0, I = 0.0;
  int angular = 0, radial = 0;
  bool converged = false;
};

double height(const Probe& p, double r);
double energy(const Probe& p, double r);
HeightEnergy height_energy(const Probe& p, double r);
// 2(alpha+1) int u <A Du, x - z0> w^alpha
double alt_energy(const Probe& p, double r);
// int u^2 mu (no weight)
double plain_height(const Probe& p, double r);
// int u^2 (s^2 - |x - z0|^2)^alpha (no mu)
double plain_G(const Probe& p, double s);
// int (Zu)^2 mu w^alpha
double zu_term(const Probe& p, double r);

struct FrequencyTrace {
  Vec2 z0;
  double alpha = 0.0;
  bool frame_applied = false;
  std::vector<double> radii, H, I, N;
  std::vector<bool> valid;
  int angular = 0, radial = 0;  // finest resolution used
  bool converged = true;
};

FrequencyTrace frequency_trace(const Probe& p, const std::vector<double>& radii);

// max(1e-4 r, 2 tol^{1/3} r)
double default_dr(double r, double tol);

// [H(r+dr) - H(r-dr)]/(2dr) - (2 alpha + n) H/r - I/((alpha+1) r), divided by H(r).
double height_variation_residual(const Probe& p, double r, double dr);

struct EnergyVariation {
  double r = 0.0;
  double Iprime = 0.0;  // Richardson-extrapolated central difference
  double I = 0.0, H = 0.0, J = 0.0;
  double base = 0.0;   // I' - (2alpha+n)/r I - 4(alpha+1)/r J
  double scale = 0.0;  // magnitude of the terms entering base
};

EnergyVariation energy_variation(const Probe& p, double r, double dr);

struct EnergyVariationReport {
  std::vector<EnergyVariation> samples;
  double M = 1.0;
  double tol = 0.0;
  // Minimal C with c_O = 0, and minimal c_O with C = 0.
  double C = 0.0, cO = 0.0;
  // min over radii of base/scale, i.e. the slack with both constants at zero.
  double min_rel_slack = 0.0;
  bool pass = false;
};

// Checks the first-variation inequality for I on the given radii.
EnergyVariationReport energy_variation_check(const Probe& p, const std::vector<double>& radii,
                                             double tol);

// min <Z, nu> / r over boundary samples of the field's region in B_r(z0).
double generalized_star_hypothesis(const Probe& p, double r, int samples = 256);

}  // namespace dini
