#include <doctest.h>

#include <cmath>

#include "catalog_charts.hpp"
#include "dini/coefficients.hpp"
#include "dini/random.hpp"

using namespace dini;

namespace {

double mat_err(const Mat2& a, const Mat2& b) { return frob_norm(a - b); }

Vec2 random_point(Rng& rng, double R) {
  return {rng.uniform(-R, R), rng.uniform(-R, R)};
}

}  // namespace

TEST_CASE("sqrt_spd") {
  CHECK(mat_err(sqrt_spd(Mat2::identity()), Mat2::identity()) < 1e-15);
  CHECK(mat_err(sqrt_spd(Mat2::diag(4, 1)), Mat2::diag(2, 1)) < 1e-15);
  Mat2 m{2, 1, 1, 2};
  Mat2 r = sqrt_spd(m);
  CHECK(mat_err(r * r, m) <= 1e-12 * frob_norm(m));
  CHECK(r.a12 == doctest::Approx(r.a21).epsilon(1e-15));
  CHECK_THROWS_AS(sqrt_spd(Mat2{1, 2, 2, 1}), DomainError);
  CHECK_THROWS_AS(sqrt_spd(Mat2{1, 0.5, 0.0, 1}), DomainError);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform(0.1, 5), c = rng.uniform(0.1, 5);
    double b = rng.uniform(-0.99, 0.99) * std::sqrt(a * c);
    Mat2 s{a, b, b, c};
    Mat2 q = sqrt_spd(s);
    CHECK(mat_err(q * q, s) <= 1e-12 * frob_norm(s));
  }
}

TEST_CASE("make_frame") {
  CoefficientField A = diag_coefficients(4, 1);
  NormalizationFrame f = make_frame(A, {1, 0});
  Vec2 t = f.forward({3, 5});
  CHECK(t.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.y == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(mat_err(f.S * f.S, A({1, 0})) < 1e-12);

  NormalizationFrame id = make_frame(identity_coefficients(), {0, 0});
  Vec2 p = id.forward({0.3, -0.7});
  CHECK(p.x == 0.3);
  CHECK(p.y == -0.7);

  Rng rng(4);
  for (const auto& c : catalog_coefficients()) {
    NormalizationFrame fr = make_frame(c, {0.2, -0.1});
    double lam = c.lambda;
    for (int i = 0; i < 1000; ++i) {
      Vec2 x = random_point(rng, 1), q = random_point(rng, 1);
      double d = norm(x - q), dt = norm(fr.forward(x) - fr.forward(q));
      CHECK(std::sqrt(lam) * d <= dt * (1 + 1e-12));
      CHECK(dt <= d / std::sqrt(lam) * (1 + 1e-12));
    }
  }
}

TEST_CASE("frame roundtrip") {
  Rng rng(5);
  for (const auto& c : catalog_coefficients()) {
    NormalizationFrame fr = make_frame(c, {0.4, -0.3});
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Vec2 x = random_point(rng, 10);
      worst = std::max(worst, norm(fr.inverse(fr.forward(x)) - x) / (1 + norm(x)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("push_matrix") {
  Mat2 a{3, 1, 1, 2};
  CoefficientField c = constant_coefficients(a);
  CoefficientField p = push_matrix(c, make_frame(c, {0.5, 0.5}));
  Rng rng(6);
  for (int i = 0; i < 100; ++i) CHECK(mat_err(p(random_point(rng, 3)), Mat2::identity()) < 1e-14);

  for (const auto& f : catalog_coefficients()) {
    INFO(f.name);
    Vec2 z0{0.3, -0.4};
    CoefficientField q = push_matrix(f, make_frame(f, z0));
    CHECK(mat_err(q({0, 0}), Mat2::identity()) <= 1e-12);
    CHECK(q.lambda == doctest::Approx(f.lambda * f.lambda));
    CHECK(q.K == doctest::Approx(std::pow(f.lambda, -1.5) * f.K));
    // Ellipticity lambda^2 |v|^2 <= <A v, v> <= lambda^{-2} |v|^2 on samples of the unit window.
    for (int i = 0; i < 500; ++i) {
      Vec2 y = random_point(rng, 0.5);
      double th = rng.uniform(0, 2 * M_PI);
      Vec2 v{std::cos(th), std::sin(th)};
      double qv = dot(q(y) * v, v);
      CHECK(qv >= q.lambda * (1 - 1e-12));
      CHECK(qv <= 1.0 / q.lambda * (1 + 1e-12));
    }
  }
}

TEST_CASE("coefficient fields satisfy their declared constants") {
  Rng rng(7);
  for (const auto& f : catalog_coefficients()) {
    INFO(f.name);
    for (int i = 0; i < 1000; ++i) {
      Vec2 x = random_point(rng, 0.7), y = random_point(rng, 0.7);
      Mat2 ax = f(x);
      CHECK(std::abs(ax.a12 - ax.a21) <= 1e-14);
      double th = rng.uniform(0, 2 * M_PI);
      Vec2 v{std::cos(th), std::sin(th)};
      CHECK(dot(ax * v, v) >= f.lambda * (1 - 1e-12));
      CHECK(dot(ax * v, v) <= 1 / f.lambda * (1 + 1e-12));
      CHECK(op_norm(ax - f(y)) <= f.K * norm(x - y) * (1 + 1e-12) + 1e-15);
    }
  }
  CHECK_THROWS_AS(affine_perturbation(2.0, Mat2{1, 0, 0, 1}), DomainError);
}

TEST_CASE("push_field and push_potential") {
  ScalarField u{[](Vec2 x) { return x.x; }, [](Vec2) { return Vec2{1, 0}; }};
  NormalizationFrame id = make_frame(identity_coefficients(), {0, 0});
  CHECK(push_field(u, id).value({0.3, 0.2}) == 0.3);

  CoefficientField A = diag_coefficients(4, 1);
  NormalizationFrame f = make_frame(A, {0.7, 0.1});
  ScalarField pu = push_field(u, f);
  CHECK(pu.value({0.25, -1}) == doctest::Approx(2 * 0.25 + 0.7).epsilon(1e-15));
  CHECK(pu.grad({0.25, -1}).x == doctest::Approx(2.0).epsilon(1e-15));

  Potential V = constant_potential(-3.0);
  Potential pv = push_potential(V, f, 0.25);
  CHECK(pv.V({1, 1}) == -3.0);
  CHECK(pv.M == doctest::Approx(2.0 * 3.0).epsilon(1e-15));
  CHECK(pushed_potential_constant(1.0) == 1.0);
}

TEST_CASE("pushed solution solves the pushed equation") {
  // div(diag(4,1) Du) = 0 for u = exp(x1/2) sin(x2); the frame turns it into a harmonic function.
  CoefficientField A = diag_coefficients(4, 1);
  ScalarField u{[](Vec2 x) { return std::exp(0.5 * x.x) * std::sin(x.y); }, nullptr};
  Vec2 z0{0.3, -0.2};
  ScalarField pu = push_field(u, make_frame(A, z0));
  CoefficientField pA = push_matrix(A, make_frame(A, z0));
  Vec2 y{0.1, 0.05};
  auto residual = [&](double h) {
    Mat2 a = pA(y);
    double uxx = (pu.value({y.x + h, y.y}) - 2 * pu.value(y) + pu.value({y.x - h, y.y})) / (h * h);
    double uyy = (pu.value({y.x, y.y + h}) - 2 * pu.value(y) + pu.value({y.x, y.y - h})) / (h * h);
    return std::abs(a.a11 * uxx + a.a22 * uyy);
  };
  double r1 = residual(0.04), r2 = residual(0.02), r3 = residual(0.01);
  CHECK(r2 < r1);
  CHECK(std::log2(r1 / r2) >= 1.0);
  CHECK(std::log2(r2 / r3) >= 1.0);
}

TEST_CASE("mu and the Z field") {
  CHECK(mu(identity_coefficients(), {0, 0}, {0.3, 0.1}) == 1.0);
  CHECK(mu(identity_coefficients(), {0, 0}, {0, 0}) == 1.0);
  CHECK(mu(diag_coefficients(2, 0.5), {0, 0}, {1, 1}) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK_THROWS_AS(mu(diag_coefficients(2, 0.5), {0, 0}, {0, 0}), DomainError);
  Vec2 z = z_field(identity_coefficients(), {0.1, 0.2}, {0.5, -0.3});
  CHECK(z.x == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(z.y == doctest::Approx(-0.5).epsilon(1e-15));

  Rng rng(8);
  for (const auto& f : catalog_coefficients()) {
    INFO(f.name);
    Vec2 z0{0.1, -0.1};
    for (int i = 0; i < 1000; ++i) {
      Vec2 x = random_point(rng, 0.6);
      Vec2 d = x - z0;
      double m = mu(f, z0, x);
      CHECK(m >= f.lambda * (1 - 1e-12));
      CHECK(m <= 1 / f.lambda * (1 + 1e-12));
      Vec2 Z = z_field(f, z0, x);
      CHECK(dot(Z, d / norm(d)) == doctest::Approx(norm(d)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mu is Lipschitz at a normalized center and div Z = n + O(r)") {
  for (const auto& f : catalog_coefficients()) {
    INFO(f.name);
    Vec2 z0{0.1, -0.1};
    NormalizationFrame fr = make_frame(f, z0);
    CoefficientField p = push_matrix(f, fr);
    Rng rng(9);
    double C = 0.0, Cdiv = 0.0;
    for (int i = 0; i < 500; ++i) {
      Vec2 y = random_point(rng, 0.3);
      double s = norm(y);
      if (s < 1e-3) continue;
      C = std::max(C, std::abs(1 - mu(p, {0, 0}, y)) / s);
      Cdiv = std::max(Cdiv, std::abs(div_z(p, {0, 0}, y) - 2.0) / s);
    }
    // Fitted constants stay below the pushed Lipschitz constant with a margin of 4.
    CHECK(C <= 4.0 * p.K + 1e-9);
    CHECK(std::isfinite(Cdiv));
    CHECK(Cdiv <= 40.0 * p.K + 1e-5);
  }
}
