#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dini/geometry.hpp"
#include "dini/linalg.hpp"

namespace dini {

// Nodes/weights on (0,1) for the weight (1-t)^alpha t^beta_exp.
struct QuadRule {
  std::vector<double> nodes, weights;
};
// Cached; exact for polynomials of degree <= 2m-1.
const QuadRule& gauss_jacobi(double alpha, double beta_exp, int m);
// Gauss-Legendre on (0,1).
const QuadRule& gauss_legendre(int m);

struct BoundarySample {
  Vec2 point;
  Vec2 normal;  // outward unit normal
};

// Planar region described by a level function (< 0 inside).
struct Region {
  std::string name;
  std::function<double(Vec2)> level;
  // Boundary samples inside the closed ball B_r(c); about n of them.
  std::function<std::vector<BoundarySample>(Vec2 c, double r, int n)> boundary;
};

Region whole_plane();
// {x2 < 0}
Region half_plane_region();
Region disk_region(double radius);
Region chart_region(const BoundaryChart& chart);
// Intersection of a region with the strip |x1| <= half_width, t = x2 - phi(x1) >= -depth.
Region chart_window_region(const BoundaryChart& chart, double half_width, double depth);

struct RayClip {
  double rho_max = 0.0;
  bool clipped = false;
};
RayClip ray_clip(const Region& region, Vec2 z0, double theta, double r);
// Sub-intervals [s0, s1] of [0, r] where z0 + s e_theta lies in the region.
std::vector<std::pair<double, double>> ray_segments(const Region& region, Vec2 z0, double theta,
                                                    double r);

struct QuadOptions {
  int angular = 64;
  int radial = 24;
  double tol = 1e-9;
  int max_angular = 1024;
  int max_radial = 192;
  bool adaptive = true;
};

// Several integrands sharing one node set.  Output k carries weight
// (r^2 - |x - z0|^2)^{alpha + extra_power[k]}.
struct BallIntegrand {
  std::vector<int> extra_power;
  std::function<void(Vec2, double*)> eval;
};

struct BallResult {
  std::vector<double> values;
  std::vector<double> abs_values;  // integrals of |f| with the same weight
  int angular = 0, radial = 0;
  bool converged = false;
  double rel_change = 0.0;
};

BallResult integrate_ball_multi(const BallIntegrand& f, const Region& region, Vec2 z0, double r,
                                double alpha, const QuadOptions& opts = {});

double integrate_ball(const std::function<double(Vec2)>& f, const Region& region, Vec2 z0,
                      double r, double alpha, const QuadOptions& opts = {});

}  // namespace dini
