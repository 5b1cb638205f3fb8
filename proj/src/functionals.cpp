#include "dini/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dini {

namespace {

constexpr double kDim = 2.0;

void check_probe(const Probe& p) {
  if (!p.field || !p.coeff) throw DomainError("probe is missing its field or coefficients");
  if (!(p.alpha > -1.0)) throw DomainError("alpha must exceed -1");
  if (!p.waive_normalization) {
    Mat2 d = (*p.coeff)(p.z0) - Mat2::identity();
    if (frob_norm(d) > 1e-12)
      throw DomainError("A(z0) != I: apply a normalization frame first");
  }
}

double mu_at(const Probe& p, Vec2 x) {
  if (x.x == p.z0.x && x.y == p.z0.y) return 1.0;
  return mu(*p.coeff, p.z0, x);
}

QuadOptions quad_for(const Probe& p) {
  QuadOptions q = p.quad;
  q.tol = std::max(q.tol, p.field->quad_tol);
  return q;
}

}  // namespace

Probe make_probe(const SolutionField& u, const CoefficientField& A, Vec2 z0, double alpha) {
  Probe p;
  p.field = &u;
  p.coeff = &A;
  p.z0 = z0;
  p.alpha = alpha;
  return p;
}

double default_alpha(const SolutionField& u) { return std::sqrt(std::max(1.0, u.potential.M)); }

HeightEnergy height_energy(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  const CoefficientField& A = *p.coeff;
  BallIntegrand bi;
  bi.extra_power = {0, 1};
  bi.eval = [&](Vec2 x, double* out) {
    double u = f.u.value(x);
    Vec2 g = f.u.grad(x);
    out[0] = u * u * mu_at(p, x);
    out[1] = dot(A(x) * g, g) + f.potential.V(x) * u * u;
  };
  BallResult res = integrate_ball_multi(bi, f.region, p.z0, r, p.alpha, quad_for(p));
  return {res.values[0], res.values[1], res.angular, res.radial,
          res.converged || !p.quad.adaptive};
}

double height(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  return integrate_ball(
      [&](Vec2 x) {
        double u = f.u.value(x);
        return u * u * mu_at(p, x);
      },
      f.region, p.z0, r, p.alpha, quad_for(p));
}

double energy(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  const CoefficientField& A = *p.coeff;
  return integrate_ball(
      [&](Vec2 x) {
        double u = f.u.value(x);
        Vec2 g = f.u.grad(x);
        return dot(A(x) * g, g) + f.potential.V(x) * u * u;
      },
      f.region, p.z0, r, p.alpha + 1.0, quad_for(p));
}

double alt_energy(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  const CoefficientField& A = *p.coeff;
  double v = integrate_ball(
      [&](Vec2 x) { return f.u.value(x) * dot(A(x) * f.u.grad(x), x - p.z0); }, f.region, p.z0,
      r, p.alpha, quad_for(p));
  return 2.0 * (p.alpha + 1.0) * v;
}

double plain_height(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  return integrate_ball(
      [&](Vec2 x) {
        double u = f.u.value(x);
        return u * u * mu_at(p, x);
      },
      f.region, p.z0, r, 0.0, quad_for(p));
}

double plain_G(const Probe& p, double s) {
  if (!p.field) throw DomainError("probe is missing its field");
  if (!(p.alpha > -1.0)) throw DomainError("alpha must exceed -1");
  const SolutionField& f = *p.field;
  return integrate_ball(
      [&](Vec2 x) {
        double u = f.u.value(x);
        return u * u;
      },
      f.region, p.z0, s, p.alpha, quad_for(p));
}

double zu_term(const Probe& p, double r) {
  check_probe(p);
  const SolutionField& f = *p.field;
  const CoefficientField& A = *p.coeff;
  return integrate_ball(
      [&](Vec2 x) {
        double m = mu_at(p, x);
        double zu = dot(A(x) * f.u.grad(x), x - p.z0);
        return zu * zu / m;
      },
      f.region, p.z0, r, p.alpha, quad_for(p));
}

FrequencyTrace frequency_trace(const Probe& p, const std::vector<double>& radii) {
  check_probe(p);
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw DomainError("trace radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("trace radii must ascend");
  }
  FrequencyTrace t;
  t.z0 = p.z0;
  t.alpha = p.alpha;
  t.frame_applied = !p.waive_normalization;
  t.radii = radii;
  for (double r : radii) {
    HeightEnergy he = height_energy(p, r);
    bool ok = std::isfinite(he.H) && std::isfinite(he.I) && he.H > 1e-300;
    t.H.push_back(he.H);
    t.I.push_back(he.I);
    t.N.push_back(ok ? he.I / he.H : 0.0);
    t.valid.push_back(ok);
    t.angular = std::max(t.angular, he.angular);
    t.radial = std::max(t.radial, he.radial);
    t.converged = t.converged && he.converged;
  }
  return t;
}

double default_dr(double r, double tol) {
  return std::max(1e-4 * r, 2.0 * std::cbrt(tol) * r);
}

double height_variation_residual(const Probe& p, double r, double dr) {
  if (!(dr > 0.0 && dr < r)) throw DomainError("dr must lie in (0, r)");
  HeightEnergy c = height_energy(p, r);
  if (!(c.H > 0.0)) throw DomainError("H vanishes; frequency undefined");
  double Hp = height(p, r + dr), Hm = height(p, r - dr);
  double dH = (Hp - Hm) / (2.0 * dr);
  double res = dH - (2.0 * p.alpha + kDim) * c.H / r - c.I / ((p.alpha + 1.0) * r);
  return res / c.H;
}

EnergyVariation energy_variation(const Probe& p, double r, double dr) {
  if (!(dr > 0.0 && dr < r)) throw DomainError("dr must lie in (0, r)");
  EnergyVariation ev;
  ev.r = r;
  HeightEnergy c = height_energy(p, r);
  if (!(c.H > 0.0)) throw DomainError("H vanishes; frequency undefined");
  ev.H = c.H;
  ev.I = c.I;
  auto central = [&](double d) { return (energy(p, r + d) - energy(p, r - d)) / (2.0 * d); };
  double d1 = central(dr), d2 = central(0.5 * dr);
  ev.Iprime = (4.0 * d2 - d1) / 3.0;
  ev.J = zu_term(p, r);
  double t1 = (2.0 * p.alpha + kDim) / r * ev.I;
  double t2 = 4.0 * (p.alpha + 1.0) / r * ev.J;
  ev.base = ev.Iprime - t1 - t2;
  ev.scale = std::abs(ev.Iprime) + std::abs(t1) + std::abs(t2);
  return ev;
}

double generalized_star_hypothesis(const Probe& p, double r, int samples) {
  const SolutionField& f = *p.field;
  double worst = HUGE_VAL;
  for (const auto& b : f.region.boundary(p.z0, r, samples)) {
    if (norm(b.point - p.z0) == 0.0) continue;
    Vec2 Z = z_field(*p.coeff, p.z0, b.point);
    worst = std::min(worst, dot(Z, b.normal) / r);
  }
  return worst;
}

EnergyVariationReport energy_variation_check(const Probe& p, const std::vector<double>& radii,
                                             double tol) {
  check_probe(p);
  EnergyVariationReport rep;
  rep.M = std::max(1.0, p.field->potential.M);
  rep.tol = tol;
  for (double r : radii) {
    double star = generalized_star_hypothesis(p, r);
    if (star < -1e-10) {
      std::ostringstream os;
      os << "hypothesis violated: domain is not generalized star-shaped about z0 at r=" << r;
      throw DomainError(os.str());
    }
  }
  rep.min_rel_slack = HUGE_VAL;
  for (double r : radii) {
    EnergyVariation ev = energy_variation(p, r, default_dr(r, quad_for(p).tol));
    rep.samples.push_back(ev);
    rep.min_rel_slack = std::min(rep.min_rel_slack, ev.base / ev.scale);
    double deficit = -ev.base - tol * ev.scale;
    if (deficit > 0.0) {
      rep.C = std::max(rep.C, deficit / (rep.M * r * ev.H));
      rep.cO = std::max(rep.cO, ev.I != 0.0 ? deficit / std::abs(ev.I) : HUGE_VAL);
    }
  }
  rep.pass = std::isfinite(rep.C);
  return rep;
}

}  // namespace dini
