#include <doctest.h>

#include <cmath>

#include "dini/analysis.hpp"
#include "dini/random.hpp"
#include "oracles.hpp"

using namespace dini;

namespace {

std::vector<double> log_radii(double a, double b, int n) {
  std::vector<double> r;
  for (int i = 0; i < n; ++i) r.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return r;
}

FrequencyTrace synthetic_trace(const std::vector<double>& r, const std::vector<double>& N) {
  FrequencyTrace t;
  t.radii = r;
  t.N = N;
  t.H.assign(r.size(), 1.0);
  t.I = N;
  t.valid.assign(r.size(), true);
  return t;
}

SolutionField scaled(const SolutionField& f, double c) {
  SolutionField g = f;
  auto v = f.u.value;
  auto d = f.u.grad;
  g.u.value = [v, c](Vec2 x) { return c * v(x); };
  g.u.grad = [d, c](Vec2 x) { return c * d(x); };
  return g;
}

}  // namespace

TEST_CASE("monotonicity fit: homogeneous harmonics need no constants") {
  for (int k : {1, 2, 3}) {
    auto e = catalog_homogeneous(k);
    Probe p = make_probe(e.field, e.coeff, {0, 0}, 1.0);
    auto rep = fit_monotonicity(frequency_trace(p, log_radii(0.01, 0.5, 12)), 1.0);
    CHECK(rep.pass);
    CHECK(rep.C1 == 0.0);
    CHECK(rep.C2 == 0.0);
  }
}

TEST_CASE("monotonicity fit: disk eigenfunctions pass and are stable under refinement") {
  for (int k : {0, 1, 3}) {
    auto e = catalog_disk_eigen(k, 1);
    Probe p = make_probe(e.field, e.coeff, e.anchor, default_alpha(e.field));
    const double M = e.field.potential.M;
    auto coarse = fit_monotonicity(frequency_trace(p, log_radii(0.01, 0.3, 16)), M);
    auto fine = fit_monotonicity(frequency_trace(p, log_radii(0.01, 0.3, 31)), M);
    INFO("k=" << k);
    CHECK(coarse.pass);
    CHECK(fine.pass);
    CHECK(std::abs(coarse.C2 - fine.C2) <= 0.2 * std::max(coarse.C2, fine.C2) + 1e-3);
    CHECK(!coarse.pareto.empty());
  }
}

TEST_CASE("monotonicity fit: invariant under u -> c u") {
  auto e = catalog_disk_eigen(2, 1);
  const double M = e.field.potential.M;
  auto radii = log_radii(0.02, 0.3, 12);
  Probe p = make_probe(e.field, e.coeff, e.anchor, default_alpha(e.field));
  auto a = fit_monotonicity(frequency_trace(p, radii), M);
  for (double c : {1e-6, -3.0, 1e5}) {
    SolutionField g = scaled(e.field, c);
    Probe q = make_probe(g, e.coeff, e.anchor, default_alpha(g));
    auto b = fit_monotonicity(frequency_trace(q, radii), M);
    CHECK(b.C1 == doctest::Approx(a.C1).epsilon(1e-6));
    CHECK(b.C2 == doctest::Approx(a.C2).epsilon(1e-6));
  }
}

TEST_CASE("monotonicity fit: an unfixable drop at tiny radii fails") {
  // e^{C1 r} and C2 M r^2 are both negligible near r = 1e-4 within the search box.
  Rng rng(21);
  auto r = log_radii(1e-4, 2e-4, 10);
  std::vector<double> N;
  for (size_t i = 0; i < r.size(); ++i) N.push_back(5.0 + rng.uniform(-2.0, 2.0));
  N[5] = N[4] - 3.0;
  auto rep = fit_monotonicity(synthetic_trace(r, N), 1.0);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_violation > 0.0);
  CHECK_THROWS_AS(fit_monotonicity(synthetic_trace(log_radii(0.1, 1, 5), {1, 2, 3, 4, 5}), 1.0),
                  DomainError);
}

TEST_CASE("three-sphere inequality") {
  auto e = catalog_disk_eigen(1, 1);
  Probe p = make_probe(e.field, e.coeff, e.anchor, default_alpha(e.field));
  auto m = fit_monotonicity(frequency_trace(p, log_radii(0.01, 0.35, 16)), e.field.potential.M);
  MonotoneFit fit{m.C1, m.C2};
  auto h = three_sphere_H(p, 0.05, 0.1, 0.3, fit);
  CHECK(h.pass);
  CHECK(h.a == doctest::Approx(std::log(0.3 / 0.2)));
  CHECK(h.a / (h.a + h.b) + h.b / (h.a + h.b) == doctest::Approx(1.0));
  CHECK(h.a > 0.0);
  CHECK(h.b > 0.0);
  auto s = three_sphere_sup(p, 0.05, 0.1, 0.3, fit);
  CHECK(s.pass);
  CHECK(s.a > 0.0);
  CHECK(s.b > 0.0);
  CHECK(s.sup1 <= s.sup2);
  CHECK(s.sup2 <= s.sup3);
  CHECK_THROWS_AS(three_sphere_H(p, 0.1, 0.05, 0.3, fit), DomainError);
  CHECK_THROWS_AS(three_sphere_H(p, 0.05, 0.1, 0.15, fit), DomainError);
}

TEST_CASE("sup norm of homogeneous harmonics is r^kappa") {
  for (int k : {1, 2, 5}) {
    auto e = catalog_homogeneous(k);
    for (double r : {0.1, 0.7}) {
      auto s = sup_norm(e.field, {0, 0}, r);
      CHECK(s.value == doctest::Approx(std::pow(r, k)).epsilon(1e-8));
      CHECK(norm(s.argmax) <= r * (1 + 1e-12));
    }
  }
  CHECK(sup_norm(catalog_constant().field, {3, 4}, 0.5).value == 1.0);
  CHECK_THROWS_AS(sup_norm(catalog_constant().field, {0, 0}, 0.0), DomainError);
}

TEST_CASE("growth factor") {
  for (double K1 : {0.0, 1.0, 5.0}) {
    double k = k_constant(K1);
    double Ct = growth_factor_limit(K1, k);
    CHECK(Ct == doctest::Approx(K1 > 0 ? std::min(1 / (24 * K1), 1 / (64 * k)) : 1 / (64 * k)));
    CHECK(growth_factor(0.0, K1, k) == doctest::Approx(1.0).epsilon(1e-14));
    double slope = growth_factor_slope(K1, k);
    for (int i = 0; i <= 50; ++i) {
      double y = Ct * i / 50;
      double f = growth_factor(y, K1, k);
      CHECK(f >= 0.0);
      CHECK(f <= std::exp(slope * y) * (1 + 1e-12));
    }
    CHECK_THROWS_AS(growth_factor(Ct * 1.01, K1, k), DomainError);
    CHECK_THROWS_AS(growth_factor(-1e-3, K1, k), DomainError);
  }
}

TEST_CASE("growth step on homogeneous harmonics over the flat chart") {
  DiniDomain d(flat_chart());
  const double r = d.R0_effective();
  for (int k : {1, 2, 3}) {
    auto e = catalog_homogeneous(k);
    auto g = growth_step(e.field, e.coeff, d, r);
    const double alpha = default_alpha(e.field);
    INFO("k=" << k);
    CHECK(g.lhs == doctest::Approx((2 * k + 2 + 2 * alpha) * std::log(2.0)).epsilon(1e-6));
    // Lambda(r) >= sqrt(r) even on a flat boundary, so f exceeds 1.
    CHECK(g.f == doctest::Approx(growth_factor(d.lambda_of(r), d.K1(), d.k())));
    CHECK(g.f > 1.0);
    CHECK(g.pass);
    for (const auto& w : g.witnesses) {
      INFO(w.name);
      CHECK(w.pass);
    }
  }
  CHECK_THROWS_AS(growth_step(catalog_homogeneous(1).field, diag_coefficients(2, 1), d, r),
                  DomainError);
}

TEST_CASE("dyadic iteration recovers the vanishing order") {
  DiniDomain d(flat_chart());
  for (int k : {1, 2, 4}) {
    auto e = catalog_homogeneous(k);
    Probe p = make_probe(e.field, e.coeff, {0, 0}, 1.0);
    auto est = dyadic_iteration(p, 0.25, 6, &d, 0.01);
    CHECK(est.fitted_order == doctest::Approx(k).epsilon(1e-6));
    CHECK(est.residual < 1e-6);
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += d.lambda_sampled(std::ldexp(0.25, -i));
    CHECK(est.K0 == doctest::Approx(std::exp(0.01 * sum)));
  }
  auto c = catalog_constant();
  Probe pc = make_probe(c.field, c.coeff, c.anchor, 1.0);
  CHECK(std::abs(dyadic_iteration(pc, 0.25, 6).fitted_order) < 1e-6);
  for (int k : {0, 1, 3, 8}) {
    auto e = catalog_disk_eigen(k, 1);
    Probe p = make_probe(e.field, e.coeff, e.anchor, default_alpha(e.field));
    CHECK(std::abs(dyadic_iteration(p, e.r0, 6).fitted_order - k) < 0.05);
  }
  Probe pc2 = make_probe(c.field, c.coeff, c.anchor, 1.0);
  CHECK_THROWS_AS(dyadic_iteration(pc2, 0.0, 6), DomainError);
  CHECK_THROWS_AS(dyadic_iteration(pc2, 0.25, 2), DomainError);
}

TEST_CASE("order versus sqrt(M) scan") {
  std::vector<CatalogEntry> fam;
  for (int k : {1, 2, 4, 8, 12}) fam.push_back(catalog_disk_eigen(k, 1));
  auto s = order_vs_M_scan(fam);
  REQUIRE(s.rows.size() == 5);
  const double j11 = bessel_zero(1, 1);
  CHECK(s.rows[0].ratio == doctest::Approx(1.0 / (1.0 + j11)).epsilon(0.02));
  CHECK(s.max_ratio < 1.0);
  for (const auto& row : s.rows) CHECK(row.ratio < 1.0);
}

TEST_CASE("small sup bound and its exponential fit") {
  for (int k : {1, 3}) {
    auto e = catalog_homogeneous(k);
    for (double r0 : {0.5, 2.0}) {
      auto s = small_sup_bound(e.field, {0, 0}, r0);
      CHECK(s.normalizer == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(s.eps == doctest::Approx(std::pow(r0 / 4, k)).epsilon(1e-7));
    }
  }
  CHECK(small_sup_bound(catalog_constant().field, {0, 0}, 1.0).eps == 1.0);
  CHECK_THROWS_AS(small_sup_bound(catalog_constant().field, {0, 0}, 5.0), DomainError);

  // Exact exponential data is recovered, and the fit is a valid lower bound.
  std::vector<std::pair<double, double>> pts;
  for (double M : {1.0, 4.0, 9.0, 25.0, 100.0}) pts.push_back({M, 0.3 * std::exp(-0.7 * (std::sqrt(M) + 1))});
  auto f = fit_small_sup(pts);
  CHECK(f.L2 == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(f.L1 == doctest::Approx(0.3).epsilon(1e-10));
  pts[2].second *= 0.5;
  f = fit_small_sup(pts);
  for (auto [M, e] : pts) CHECK(e >= f.L1 * std::exp(-f.L2 * (std::sqrt(M) + 1)) * (1 - 1e-12));
  CHECK_THROWS_AS(fit_small_sup({{1.0, 0.1}}), DomainError);
}

TEST_CASE("constants ledger") {
  auto L = constants_ledger(1.0, 1.0, flat_chart());
  CHECK(L.K1 == 1.0);
  CHECK(L.k == 80.0);
  CHECK(L.cap == doctest::Approx(1.0 / 5144.0));
  CHECK(L.c2 == 4112.0);
  CHECK(L.pass);
  CHECK(k_constant(0.0) == 72.0);

  for (double lambda : {1.0, 0.5, 0.25})
    for (double K : {0.0, 0.5, 2.0}) {
      INFO("lambda=" << lambda << " K=" << K);
      auto l = constants_ledger(lambda, K, chart_from_modulus(power_modulus(0.5), 0.5), 7, 100);
      CHECK(l.pass);
      for (const auto& c : l.checks) {
        INFO(c.display);
        CHECK(c.worst >= -1e-12);
      }
      CHECK(l.cap <= 1e-3);
      CHECK(l.lambda_R0 <= l.cap);
    }
  CHECK_THROWS_AS(constants_ledger(1.5, 0.0, flat_chart()), DomainError);
  CHECK_THROWS_AS(constants_ledger(1.0, -1.0, flat_chart()), DomainError);
}
