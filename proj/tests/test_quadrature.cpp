#include <doctest.h>

#include <cmath>

#include "dini/fields.hpp"
#include "dini/quadrature.hpp"
#include "oracles.hpp"

using namespace dini;

namespace {

double apply(const QuadRule& q, const std::function<double(double)>& f) {
  double s = 0;
  for (size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Jacobi small rules") {
  CHECK(apply(gauss_jacobi(1.0, 0.0, 1), [](double) { return 1.0; }) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(apply(gauss_jacobi(0.0, 0.0, 2), [](double t) { return t * t; }) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(apply(gauss_legendre(2), [](double t) { return t * t * t; }) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("Gauss-Jacobi moments against Beta functions") {
  const QuadRule& q = gauss_jacobi(3.2, 0.0, 8);
  for (int k = 0; k <= 15; ++k) {
    double exact = std::beta(k + 1.0, 4.2);
    CHECK(std::abs(apply(q, [k](double t) { return std::pow(t, k); }) / exact - 1) < 1e-12);
  }
  for (double a : {0.0, 0.5, 1.0, 2.5, std::sqrt(10.0), 12.0}) {
    for (double b : {-0.5, 0.0, 1.0}) {
      for (int m : {1, 3, 10, 24}) {
        const QuadRule& r = gauss_jacobi(a, b, m);
        REQUIRE(r.nodes.size() == static_cast<size_t>(m));
        for (size_t i = 0; i < r.nodes.size(); ++i) {
          CHECK(r.weights[i] > 0.0);
          CHECK(r.nodes[i] > 0.0);
          CHECK(r.nodes[i] < 1.0);
        }
        for (int k = 0; k <= 2 * m - 1; ++k) {
          double exact = std::beta(k + b + 1.0, a + 1.0);
          CHECK(std::abs(apply(r, [k](double t) { return std::pow(t, k); }) / exact - 1) < 1e-11);
        }
      }
    }
  }
  CHECK_THROWS_AS(gauss_jacobi(-1.0, 0.0, 4), DomainError);
  CHECK_THROWS_AS(gauss_jacobi(1.0, 0.0, 0), DomainError);
}

TEST_CASE("integrate_ball closed forms") {
  auto one = [](Vec2) { return 1.0; };
  CHECK(integrate_ball(one, whole_plane(), {0, 0}, 1.0, 1.0) == doctest::Approx(M_PI / 2).epsilon(1e-13));
  CHECK(integrate_ball(one, whole_plane(), {0, 0}, 1.0, 0.0) == doctest::Approx(M_PI).epsilon(1e-13));
  CHECK(integrate_ball(one, half_plane_region(), {0, 0}, 1.0, 1.0) == doctest::Approx(M_PI / 4).epsilon(1e-13));
  for (double a : {0.0, 1.0, 2.5, std::sqrt(10.0)}) {
    for (double r : {0.01, 0.3, 1.0, 2.0}) {
      double exact = M_PI * std::pow(r, 2 + 2 * a) / (a + 1);
      CHECK(std::abs(integrate_ball(one, whole_plane(), {0.3, -0.2}, r, a) / exact - 1) < 1e-10);
    }
  }
  // Homogeneous oracle: u = Im z^k on the half plane.
  for (int k : {1, 2, 5})
    for (double a : {1.0, 2.0}) {
      auto e = catalog_homogeneous(k);
      auto u2 = [&](Vec2 x) { double v = e.field.u.value(x); return v * v; };
      CHECK(std::abs(integrate_ball(u2, half_plane_region(), {0, 0}, 0.7, a) /
                         oracle::homogeneous_height(k, a, 0.7) - 1) < 1e-10);
    }
}

TEST_CASE("integrate_ball is monotone in r for nonnegative integrands") {
  auto f = [](Vec2 x) { return 1.0 + std::sin(3 * x.x) * std::sin(3 * x.x); };
  Region reg = disk_region(1.0);
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double v = integrate_ball(f, reg, {0.2, 0.1}, 0.04 * i, 1.5);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("refinement changes catalog integrals by less than 1e-9") {
  auto e = catalog_disk_eigen(3, 1);
  auto u2 = [&](Vec2 x) { double v = e.field.u.value(x); return v * v; };
  QuadOptions base;
  QuadOptions fine = base;
  fine.angular *= 2;
  fine.radial *= 2;
  for (double r : {0.1, 0.5, 0.9}) {
    double a = integrate_ball(u2, e.field.region, {0, 0}, r, 2.0, base);
    double b = integrate_ball(u2, e.field.region, {0, 0}, r, 2.0, fine);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
  }
}

TEST_CASE("ray_clip") {
  Region hp = half_plane_region();
  RayClip c = ray_clip(hp, {0, -0.01}, M_PI / 2, 0.5);
  CHECK(c.clipped);
  CHECK(c.rho_max == doctest::Approx(0.01).epsilon(1e-10));
  c = ray_clip(hp, {0, -0.01}, -M_PI / 2, 0.5);
  CHECK_FALSE(c.clipped);
  CHECK(c.rho_max == 0.5);

  // |x|^{3/2} chart from an interior point: first crossing against a dense scan plus bisection.
  BoundaryChart g = power_graph_chart(1.0, 1.5, 0.5);
  Region reg = chart_region(g);
  Vec2 z0{0.0, -0.02};
  const double r = 0.3;
  for (double th : {0.2, 0.9, M_PI / 2, 2.0, 2.9}) {
    Vec2 e{std::cos(th), std::sin(th)};
    auto lvl = [&](double s) { return reg.level(z0 + s * e); };
    const int n = 1000000;
    double hit = r;
    for (int j = 1; j <= n; ++j) {
      double s = r * j / n;
      if (lvl(s) >= 0.0) {
        double a = r * (j - 1) / n, b = s;
        for (int it = 0; it < 100; ++it) {
          double m = 0.5 * (a + b);
          (lvl(m) >= 0.0 ? b : a) = m;
        }
        hit = 0.5 * (a + b);
        break;
      }
    }
    RayClip rc = ray_clip(reg, z0, th, r);
    INFO("theta = " << th);
    CHECK(std::abs(rc.rho_max - hit) < 1e-10);
  }
}

TEST_CASE("a ray with many boundary crossings is reported with its angle") {
  Region wavy;
  wavy.name = "wavy";
  wavy.level = [](Vec2 x) { return x.y - 0.05 * std::sin(60 * x.x); };
  try {
    ray_segments(wavy, {-0.5, 0.0}, 0.0, 1.0);
    FAIL("expected a NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("angle 0") != std::string::npos);
  }
}
