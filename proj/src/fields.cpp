#include "dini/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <regex>
#include <sstream>

#include "dini/numerics.hpp"

namespace dini {

namespace {

using cplx = std::complex<double>;

cplx ipow(cplx w, int k) {
  cplx out(1.0, 0.0);
  for (int i = 0; i < k; ++i) out *= w;
  return out;
}

}  // namespace

CatalogEntry catalog_homogeneous(int kappa) {
  if (kappa < 1) throw DomainError("catalog_homogeneous needs kappa >= 1");
  CatalogEntry e;
  e.name = "imz_kappa" + std::to_string(kappa);
  e.kappa = kappa;
  e.anchor = {0.0, 0.0};
  e.boundary_anchor = true;
  e.window = HUGE_VAL;
  // Homogeneous, so any starting scale works.
  e.r0 = 0.25;
  e.coeff = identity_coefficients();
  const int k = kappa;
  SolutionField& f = e.field;
  f.name = e.name;
  f.u.value = [k](Vec2 x) { return ipow(cplx(x.x, -x.y), k).imag(); };
  f.u.grad = [k](Vec2 x) {
    cplx d = static_cast<double>(k) * ipow(cplx(x.x, -x.y), k - 1);
    return Vec2{d.imag(), -d.real()};
  };
  f.hessian = [k](Vec2 x) {
    cplx d2 = k >= 2 ? static_cast<double>(k) * (k - 1) * ipow(cplx(x.x, -x.y), k - 2) : cplx(0, 0);
    return Mat2{d2.imag(), -d2.real(), -d2.real(), -d2.imag()};
  };
  f.potential = zero_potential();
  f.region = half_plane_region();
  return e;
}

double bessel_j_scaled(int n, double x) {
  // sum_k (-1)^k (x/2)^{2k} / (k! (k+n)!) * 2^{-n}
  long double h = static_cast<long double>(x) / 2;
  long double h2 = h * h;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term /= i;
  long double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + n));
    sum += term;
  }
  return static_cast<double>(sum / std::pow(2.0L, n));
}

double bessel_j(int n, double x) {
  if (n < 0) throw DomainError("bessel_j: negative order");
  return bessel_j_scaled(n, x) * std::pow(x, n);
}

namespace {

// d/dx [J_n(x)/x^n] / x, also smooth.
double bessel_j_scaled_dlog(int n, double x) {
  long double h = static_cast<long double>(x) / 2;
  long double h2 = h * h;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term /= i;
  long double sum = 0.0L;
  // term_k = (-1)^k h^{2k}/(k!(k+n)!); derivative w.r.t. x of h^{2k} is k h^{2k-1},
  // divided by x = 2h gives (k/2) h^{2k-2}.
  long double base = term;  // k = 0 coefficient
  long double hp = 1.0L;    // h^{2k-2}
  for (int k = 1; k < 60; ++k) {
    base *= -1.0L / (static_cast<long double>(k) * (k + n));
    sum += base * (static_cast<long double>(k) / 2) * hp;
    hp *= h2;
  }
  return static_cast<double>(sum / std::pow(2.0L, n));
}

}  // namespace

double bessel_zero(int n, int m) {
  if (n < 0 || n > 12 || m < 1 || m > 3)
    throw DomainError("bessel_zero: outside the envelope n <= 12, 1 <= m <= 3");
  static std::mutex mtx;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({n, m});
  if (it != cache.end()) return it->second;
  const double step = 0.05;
  double a = step, fa = bessel_j_scaled(n, a);
  int found = 0;
  double root = 0.0;
  for (int i = 2; i < 4000; ++i) {
    double b = step * i, fb = bessel_j_scaled(n, b);
    if ((fa < 0) != (fb < 0)) {
      if (++found == m) {
        root = bisect([n](double x) { return bessel_j_scaled(n, x); }, a, b, 1e-15);
        break;
      }
    }
    a = b;
    fa = fb;
  }
  if (found < m) throw NumericError("bessel_zero: scan did not bracket the zero");
  cache[{n, m}] = root;
  return root;
}

CatalogEntry catalog_disk_eigen(int kappa, int m) {
  const double j = bessel_zero(kappa, m);
  CatalogEntry e;
  std::ostringstream os;
  os << "disk_eigen_k" << kappa << "_m" << m;
  e.name = os.str();
  e.kappa = kappa;
  e.anchor = {0.0, 0.0};
  e.boundary_anchor = false;
  e.window = 1.0;
  // Interior window: half the distance to the boundary, quartered.
  e.r0 = 0.125;
  e.coeff = identity_coefficients();
  const int k = kappa;
  SolutionField& f = e.field;
  f.name = e.name;
  // u = g(s) P(x), g(s) = J_k(j s)/s^k, P = Im((x1 + i x2)^k) (P = 1 for k = 0).
  f.u.value = [k, j](Vec2 x) {
    double s = norm(x);
    double P = k == 0 ? 1.0 : ipow(cplx(x.x, x.y), k).imag();
    return std::pow(j, k) * bessel_j_scaled(k, j * s) * P;
  };
  f.u.grad = [k, j](Vec2 x) {
    double s = norm(x);
    double P = k == 0 ? 1.0 : ipow(cplx(x.x, x.y), k).imag();
    Vec2 dP{0.0, 0.0};
    if (k >= 1) {
      cplx d = static_cast<double>(k) * ipow(cplx(x.x, x.y), k - 1);
      dP = {d.imag(), d.real()};
    }
    double jk = std::pow(j, k);
    double g = jk * bessel_j_scaled(k, j * s);
    // g'(s)/s = j^k * j^2 * [d/dy (J_k(y)/y^k)]/y at y = j s.
    double gp_over_s = jk * j * j * bessel_j_scaled_dlog(k, j * s);
    return gp_over_s * P * x + g * dP;
  };
  f.potential = constant_potential(-j * j);
  f.region = disk_region(1.0);
  return e;
}

CatalogEntry catalog_constant() {
  CatalogEntry e;
  e.name = "unit_constant";
  e.kappa = 0;
  e.anchor = {0.0, 0.0};
  e.boundary_anchor = false;
  e.window = HUGE_VAL;
  e.r0 = 0.125;
  e.coeff = identity_coefficients();
  e.field.name = e.name;
  e.field.u.value = [](Vec2) { return 1.0; };
  e.field.u.grad = [](Vec2) { return Vec2{0.0, 0.0}; };
  e.field.hessian = [](Vec2) { return Mat2{}; };
  e.field.potential = zero_potential();
  e.field.region = whole_plane();
  return e;
}

CatalogEntry catalog_lookup(const std::string& name) {
  std::smatch mt;
  static const std::regex imz("imz_kappa([0-9]+)");
  static const std::regex disk("disk_eigen_k([0-9]+)_m([0-9]+)");
  if (std::regex_match(name, mt, imz)) return catalog_homogeneous(std::stoi(mt[1]));
  if (std::regex_match(name, mt, disk))
    return catalog_disk_eigen(std::stoi(mt[1]), std::stoi(mt[2]));
  if (name == "unit_constant") return catalog_constant();
  throw DomainError("unknown catalog entry: " + name);
}

SolutionField push_solution(const SolutionField& u, const NormalizationFrame& frame,
                            double lambda) {
  SolutionField out;
  out.name = u.name;
  out.kind = u.kind;
  out.quad_tol = u.quad_tol;
  out.u = push_field(u.u, frame);
  out.potential = push_potential(u.potential, frame, lambda);
  Region src = u.region;
  NormalizationFrame fr = frame;
  out.region.name = src.name + ":pushed";
  out.region.level = [src, fr](Vec2 y) { return src.level(fr.inverse(y)); };
  out.region.boundary = [src, fr](Vec2 c, double r, int n) {
    // |S y| <= |y| ||S||, so the preimage of B_r(c) sits in B_{r ||S||}(T^{-1} c).
    double grow = op_norm(fr.S);
    std::vector<BoundarySample> pre = src.boundary(fr.inverse(c), r * grow, n);
    std::vector<BoundarySample> res;
    for (const auto& b : pre) {
      Vec2 y = fr.forward(b.point);
      if (norm(y - c) > r) continue;
      Vec2 nn = fr.S * b.normal;
      res.push_back({y, nn / norm(nn)});
    }
    return res;
  };
  return out;
}

GridField::GridField(int nx, int ny, double h, double xi0, double t0, std::vector<double> values,
                     BoundaryChart chart)
    : nx_(nx), ny_(ny), h_(h), xi0_(xi0), t0_(t0), values_(std::move(values)),
      chart_(std::move(chart)) {
  if (nx < 2 || ny < 2 || !(h > 0.0))
    throw DomainError("grid field needs at least 3x3 nodes and positive spacing");
  if (values_.size() != static_cast<size_t>(nx + 1) * (ny + 1))
    throw DomainError("grid field value count does not match the header");
  dxi_.assign(values_.size(), 0.0);
  dt_.assign(values_.size(), 0.0);
  auto at = [&](int i, int j) { return values_[static_cast<size_t>(j) * (nx_ + 1) + i]; };
  for (int j = 0; j <= ny_; ++j) {
    for (int i = 0; i <= nx_; ++i) {
      double gx, gt;
      if (i == 0) gx = (-3 * at(0, j) + 4 * at(1, j) - at(2, j)) / (2 * h_);
      else if (i == nx_) gx = (3 * at(nx_, j) - 4 * at(nx_ - 1, j) + at(nx_ - 2, j)) / (2 * h_);
      else gx = (at(i + 1, j) - at(i - 1, j)) / (2 * h_);
      if (j == 0) gt = (-3 * at(i, 0) + 4 * at(i, 1) - at(i, 2)) / (2 * h_);
      else if (j == ny_) gt = (3 * at(i, ny_) - 4 * at(i, ny_ - 1) + at(i, ny_ - 2)) / (2 * h_);
      else gt = (at(i, j + 1) - at(i, j - 1)) / (2 * h_);
      size_t idx = static_cast<size_t>(j) * (nx_ + 1) + i;
      dxi_[idx] = gx;
      dt_[idx] = gt;
    }
  }
}

void GridField::locate(Vec2 x, int& i, int& j, double& fx, double& fy, double& dphi) const {
  double xi = std::clamp(x.x, xi0_, xi0_ + nx_ * h_);
  double t = x.y - chart_.phi(xi);
  dphi = chart_.dphi(xi);
  double gx = std::clamp((xi - xi0_) / h_, 0.0, static_cast<double>(nx_));
  double gy = std::clamp((t - t0_) / h_, 0.0, static_cast<double>(ny_));
  i = std::min(static_cast<int>(gx), nx_ - 1);
  j = std::min(static_cast<int>(gy), ny_ - 1);
  fx = gx - i;
  fy = gy - j;
}

double GridField::eval(Vec2 x) const {
  int i, j;
  double fx, fy, dp;
  locate(x, i, j, fx, fy, dp);
  return (1 - fx) * (1 - fy) * node(i, j) + fx * (1 - fy) * node(i + 1, j) +
         (1 - fx) * fy * node(i, j + 1) + fx * fy * node(i + 1, j + 1);
}

Vec2 GridField::grad(Vec2 x) const {
  int i, j;
  double fx, fy, dp;
  locate(x, i, j, fx, fy, dp);
  auto lerp = [&](const std::vector<double>& a) {
    auto n = [&](int ii, int jj) { return a[static_cast<size_t>(jj) * (nx_ + 1) + ii]; };
    return (1 - fx) * (1 - fy) * n(i, j) + fx * (1 - fy) * n(i + 1, j) +
           (1 - fx) * fy * n(i, j + 1) + fx * fy * n(i + 1, j + 1);
  };
  double uxi = lerp(dxi_), ut = lerp(dt_);
  return {uxi - dp * ut, ut};
}

SolutionField grid_solution(std::shared_ptr<const GridField> grid, Potential potential,
                            std::string name) {
  SolutionField f;
  f.name = std::move(name);
  f.kind = SolutionField::Kind::grid;
  f.u.value = [grid](Vec2 x) { return grid->eval(x); };
  f.u.grad = [grid](Vec2 x) { return grid->grad(x); };
  f.potential = std::move(potential);
  double L = -grid->xi0();
  double D = -grid->t0();
  f.region = chart_window_region(grid->chart(), L, D);
  f.quad_tol = 1e-3;
  return f;
}

namespace {

bool integral_multiple(double len, double h, int& n) {
  double q = len / h;
  n = static_cast<int>(std::lround(q));
  return n >= 2 && std::abs(q - n) <= 1e-9 * q;
}

}  // namespace

FdResult fd_solve(const FdProblem& p, const FdOptions& opts) {
  const double window = std::min(p.half_width, p.depth);
  if (!(p.h > 0.0) || p.h > window / 32.0 * (1.0 + 1e-12))
    throw DomainError("fd_solve: spacing must satisfy h <= window/32");
  if (p.half_width > 0.95 * p.chart.R0)
    throw DomainError("fd_solve: window exceeds the chart's sampling limit");
  if (!p.data) throw DomainError("fd_solve: Dirichlet data missing");
  int nx2, ny;
  if (!integral_multiple(2.0 * p.half_width, p.h, nx2) || !integral_multiple(p.depth, p.h, ny))
    throw DomainError("fd_solve: window sides must be integer multiples of h");
  const int nx = nx2;
  const double h = p.h, L = p.half_width, D = p.depth;
  const size_t W = static_cast<size_t>(nx) + 1;
  const size_t nodes = W * (ny + 1);
  auto id = [W](int i, int j) { return static_cast<size_t>(j) * W + i; };

  // Strip-coordinate coefficient J^{-1} A J^{-T}, J^{-1} = [[1,0],[-phi',1]].
  std::vector<Mat2> At(nodes);
  std::vector<double> Vn(nodes);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double xi = -L + i * h, t = -D + j * h;
      Vec2 x{xi, t + p.chart.phi(xi)};
      Mat2 a = p.coeff(x);
      double g = p.chart.dphi(xi);
      Mat2 s;
      s.a11 = a.a11;
      s.a12 = a.a12 - g * a.a11;
      s.a21 = a.a21 - g * a.a11;
      s.a22 = a.a22 - g * (a.a12 + a.a21) + g * g * a.a11;
      At[id(i, j)] = s;
      Vn[id(i, j)] = p.potential.V(x);
    }
  }

  // Stencil: 3x3 neighbourhood coefficients per node, offsets (di, dj) in [-1, 1].
  std::vector<std::array<double, 9>> K(nodes);
  for (auto& k : K) k.fill(0.0);
  auto add = [&](int i, int j, int di, int dj, double v) { K[id(i, j)][(dj + 1) * 3 + (di + 1)] += v; };
  auto hmean = [](double a, double b) { return 2.0 * a * b / (a + b); };

  // Diagonal flux terms on faces.
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double c = hmean(At[id(i, j)].a11, At[id(i + 1, j)].a11);
      add(i, j, 0, 0, c);
      add(i, j, 1, 0, -c);
      add(i + 1, j, 0, 0, c);
      add(i + 1, j, -1, 0, -c);
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double c = hmean(At[id(i, j)].a22, At[id(i, j + 1)].a22);
      add(i, j, 0, 0, c);
      add(i, j, 0, 1, -c);
      add(i, j + 1, 0, 0, c);
      add(i, j + 1, 0, -1, -c);
    }
  }
  // Cross term per cell from averaged cell gradients; only when present.
  bool cross = false;
  for (const auto& a : At)
    if (std::abs(a.a12) > 1e-15 || std::abs(a.a21) > 1e-15) cross = true;
  if (cross) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double c12 = 0.0;
        for (int dj = 0; dj <= 1; ++dj)
          for (int di = 0; di <= 1; ++di) {
            const Mat2& a = At[id(i + di, j + dj)];
            c12 += 0.25 * 0.5 * (a.a12 + a.a21);
          }
        // Energy 2 c12 h^2 Dxi Dt with Dxi = sum dx . U / (2h), Dt = sum dy . U / (2h).
        const int ci[4] = {0, 1, 0, 1}, cj[4] = {0, 0, 1, 1};
        const double dx[4] = {-1, 1, -1, 1}, dy[4] = {-1, -1, 1, 1};
        const double coef = 2.0 * c12 / 4.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            double v = 0.5 * coef * (dx[a] * dy[b] + dy[a] * dx[b]);
            if (v != 0.0) add(i + ci[a], j + cj[a], ci[b] - ci[a], cj[b] - cj[a], v);
          }
      }
    }
  }
  for (size_t n = 0; n < nodes; ++n) K[n][4] += Vn[n] * h * h;

  // Boundary values: Gamma (j = ny) zero, data elsewhere.
  std::vector<double> U(nodes, 0.0);
  std::vector<char> fixed(nodes, 0);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i != 0 && i != nx && j != 0 && j != ny) continue;
      fixed[id(i, j)] = 1;
      if (j == ny) continue;
      double xi = -L + i * h, t = -D + j * h;
      U[id(i, j)] = p.data({xi, t + p.chart.phi(xi)});
    }
  }

  // Unknown numbering and CSR-free matvec on the stencil.
  std::vector<long> uid(nodes, -1);
  std::vector<size_t> node_of;
  for (size_t n = 0; n < nodes; ++n)
    if (!fixed[n]) {
      uid[n] = static_cast<long>(node_of.size());
      node_of.push_back(n);
    }
  const size_t N = node_of.size();
  std::vector<double> b(N, 0.0), diag(N);
  for (size_t q = 0; q < N; ++q) {
    size_t n = node_of[q];
    int i = static_cast<int>(n % W), j = static_cast<int>(n / W);
    diag[q] = K[n][4];
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        double v = K[n][(dj + 1) * 3 + (di + 1)];
        if (v == 0.0) continue;
        size_t m = id(i + di, j + dj);
        if (fixed[m]) b[q] -= v * U[m];
      }
    if (!(diag[q] > 0.0))
      throw NumericError("fd_solve: nonpositive diagonal; the discrete operator is indefinite, "
                         "use a smaller window");
  }
  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (size_t q = 0; q < N; ++q) {
      size_t n = node_of[q];
      int i = static_cast<int>(n % W), j = static_cast<int>(n / W);
      double s = 0.0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          double v = K[n][(dj + 1) * 3 + (di + 1)];
          if (v == 0.0) continue;
          long m = uid[id(i + di, j + dj)];
          if (m >= 0) s += v * x[static_cast<size_t>(m)];
        }
      y[q] = s;
    }
  };

  // Jacobi-preconditioned conjugate gradients.
  FdResult res;
  std::vector<double> x(N, 0.0), r = b, z(N), pv(N), Ap(N);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) bnorm = 1.0;
  for (size_t q = 0; q < N; ++q) z[q] = r[q] / diag[q];
  pv = z;
  double rz = 0.0;
  for (size_t q = 0; q < N; ++q) rz += r[q] * z[q];
  const int max_iter = opts.max_iter_factor * static_cast<int>(N);
  double rel = 0.0;
  {
    double rn = 0.0;
    for (double v : r) rn += v * v;
    rel = std::sqrt(rn) / bnorm;
  }
  res.history.push_back(rel);
  int it = 0;
  while (rel > opts.tol) {
    if (it >= max_iter) {
      std::ostringstream os;
      os << "fd_solve: conjugate gradients did not converge in " << max_iter
         << " iterations; residual history:";
      size_t stride = std::max<size_t>(1, res.history.size() / 10);
      for (size_t k = 0; k < res.history.size(); k += stride) os << ' ' << res.history[k];
      os << ' ' << res.history.back();
      throw NumericError(os.str());
    }
    matvec(pv, Ap);
    double pAp = 0.0;
    for (size_t q = 0; q < N; ++q) pAp += pv[q] * Ap[q];
    if (!(pAp > 0.0))
      throw NumericError("fd_solve: discrete operator is indefinite (V too large for this "
                         "window); use a smaller window");
    double alpha = rz / pAp;
    for (size_t q = 0; q < N; ++q) {
      x[q] += alpha * pv[q];
      r[q] -= alpha * Ap[q];
    }
    double rn = 0.0;
    for (double v : r) rn += v * v;
    rel = std::sqrt(rn) / bnorm;
    res.history.push_back(rel);
    for (size_t q = 0; q < N; ++q) z[q] = r[q] / diag[q];
    double rz_new = 0.0;
    for (size_t q = 0; q < N; ++q) rz_new += r[q] * z[q];
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t q = 0; q < N; ++q) pv[q] = z[q] + beta * pv[q];
    ++it;
  }
  for (size_t q = 0; q < N; ++q) U[node_of[q]] = x[q];
  res.iterations = it;
  res.residual = rel;
  res.grid = std::make_shared<GridField>(nx, ny, h, -L, -D, std::move(U), p.chart);
  return res;
}

double grid_max_error(const GridField& g, const std::function<double(Vec2)>& exact) {
  double err = 0.0;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      double xi = g.xi0() + i * g.h(), t = g.t0() + j * g.h();
      Vec2 x{xi, t + g.chart().phi(xi)};
      err = std::max(err, std::abs(g.node(i, j) - exact(x)));
    }
  return err;
}

}  // namespace dini
