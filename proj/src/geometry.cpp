#include "dini/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dini/numerics.hpp"
#include "dini/random.hpp"

namespace dini {

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

constexpr double kLambdaCeiling = 1e-3;

}  // namespace

double DiniModulus::psi(double r) const {
  if (r < 0) throw DomainError("modulus evaluated at negative radius");
  if (r == 0) return 0.0;
  switch (kind) {
    case Kind::flat:
      return 0.0;
    case Kind::power:
      return scale * std::pow(r, beta);
    case Kind::log_power:
      return scale * std::pow(std::log(2.0 * std::numbers::e / r), -(1.0 + delta));
    case Kind::custom: {
      const auto& t = table;
      if (r <= t.front().first) return t.front().second * r / t.front().first;
      if (r >= t.back().first) return t.back().second;
      auto it = std::upper_bound(t.begin(), t.end(), r,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      double s = std::log(r / lo.first) / std::log(hi.first / lo.first);
      return lo.second + s * (hi.second - lo.second);
    }
  }
  return 0.0;
}

std::string DiniModulus::kind_name() const {
  switch (kind) {
    case Kind::flat: return "flat";
    case Kind::power: return "power";
    case Kind::log_power: return "log_power";
    case Kind::custom: return "custom";
  }
  return "?";
}

DiniModulus flat_modulus() { return DiniModulus{}; }

DiniModulus power_modulus(double beta, double scale) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("power modulus needs beta in (0,1]");
  if (!(scale > 0.0)) throw DomainError("modulus scale must be positive");
  DiniModulus m;
  m.kind = DiniModulus::Kind::power;
  m.beta = beta;
  m.scale = scale;
  return m;
}

DiniModulus log_power_modulus(double delta, double scale) {
  if (!(delta > 0.0)) throw DomainError("log_power modulus needs delta > 0");
  if (!(scale > 0.0)) throw DomainError("modulus scale must be positive");
  DiniModulus m;
  m.kind = DiniModulus::Kind::log_power;
  m.delta = delta;
  m.scale = scale;
  // psi(r) stays below 1 and increasing for r < 2e.
  m.R0_cap = 2.0;
  return m;
}

DiniModulus custom_modulus(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw DomainError("custom modulus needs a nonempty table");
  for (size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].first > 0.0) || table[i].second < 0.0)
      throw DomainError("custom modulus table needs r > 0 and psi >= 0");
    if (i > 0 && !(table[i].first > table[i - 1].first))
      throw DomainError("custom modulus radii must be strictly increasing");
    if (i > 0 && table[i].second < table[i - 1].second)
      throw DomainError("custom modulus must be nondecreasing");
  }
  DiniModulus m;
  m.kind = DiniModulus::Kind::custom;
  m.table = std::move(table);
  m.R0_cap = m.table.back().first;
  return m;
}

double dini_integral(const DiniModulus& m, double eps, double upper) {
  if (!(eps > 0.0 && eps < upper)) throw DomainError("dini_integral needs 0 < eps < upper");
  switch (m.kind) {
    case DiniModulus::Kind::flat:
      return 0.0;
    case DiniModulus::Kind::power:
      return m.scale * (std::pow(upper, m.beta) - std::pow(eps, m.beta)) / m.beta;
    case DiniModulus::Kind::log_power: {
      const double e2 = 2.0 * std::numbers::e;
      if (upper >= e2) throw DomainError("log_power modulus only defined below 2e");
      double lu = std::log(e2 / upper), le = std::log(e2 / eps);
      return m.scale * (std::pow(lu, -m.delta) - std::pow(le, -m.delta)) / m.delta;
    }
    case DiniModulus::Kind::custom: {
      const auto& t = m.table;
      double total = 0.0;
      // Linear piece below the table.
      double r0 = t.front().first, p0 = t.front().second;
      if (eps < r0) total += p0 * (std::min(upper, r0) - eps) / r0;
      // psi linear in u = log r on each table interval: exact trapezoid in u.
      for (size_t i = 0; i + 1 < t.size(); ++i) {
        double a = std::max(eps, t[i].first), b = std::min(upper, t[i + 1].first);
        if (a >= b) continue;
        total += 0.5 * (m.psi(a) + m.psi(b)) * std::log(b / a);
      }
      double rn = t.back().first;
      if (upper > rn) total += t.back().second * std::log(upper / std::max(eps, rn));
      return total;
    }
  }
  return 0.0;
}

double dini_integral_limit(const DiniModulus& m, double upper) {
  switch (m.kind) {
    case DiniModulus::Kind::flat:
      return 0.0;
    case DiniModulus::Kind::power:
      return m.scale * std::pow(upper, m.beta) / m.beta;
    case DiniModulus::Kind::log_power: {
      double lu = std::log(2.0 * std::numbers::e / upper);
      return m.scale * std::pow(lu, -m.delta) / m.delta;
    }
    case DiniModulus::Kind::custom: {
      // Below the first node the contribution is p0 * (r0 - 0) / r0.
      double r0 = m.table.front().first;
      double rest = upper > r0 ? dini_integral(m, r0, upper) : 0.0;
      double head = m.table.front().second * std::min(upper, r0) / r0;
      return head + rest;
    }
  }
  return 0.0;
}

BoundaryChart flat_chart(double R0) {
  BoundaryChart c;
  c.name = "flat";
  c.phi = [](double) { return 0.0; };
  c.dphi = [](double) { return 0.0; };
  c.modulus = flat_modulus();
  c.R0 = R0;
  return c;
}

BoundaryChart chart_from_modulus(const DiniModulus& m, double R0) {
  if (!(R0 > 0.0)) throw DomainError("chart radius must be positive");
  BoundaryChart c;
  c.modulus = m;
  c.R0 = R0;
  switch (m.kind) {
    case DiniModulus::Kind::flat:
      return flat_chart(R0);
    case DiniModulus::Kind::power: {
      double b = m.beta, s = m.scale;
      c.name = "power";
      c.phi = [b, s](double x) { return s * std::pow(std::abs(x), 1.0 + b) / (2.0 * (1.0 + b)); };
      c.dphi = [b, s](double x) { return 0.5 * sgn(x) * s * std::pow(std::abs(x), b); };
      return c;
    }
    default: {
      c.name = m.kind_name();
      DiniModulus mm = m;
      c.phi = [mm](double x) {
        return 0.5 * integrate_dyadic([&mm](double s) { return mm.psi(s); }, std::abs(x));
      };
      c.dphi = [mm](double x) { return 0.5 * sgn(x) * mm.psi(std::abs(x)); };
      return c;
    }
  }
}

BoundaryChart power_graph_chart(double cst, double p, double R0) {
  if (!(p > 1.0 && p <= 2.0)) throw DomainError("power graph exponent must lie in (1,2]");
  if (!(cst > 0.0)) throw DomainError("power graph amplitude must be positive");
  BoundaryChart c;
  std::ostringstream os;
  os << "graph_" << cst << "_abs_x_pow_" << p;
  c.name = os.str();
  c.phi = [cst, p](double x) { return cst * std::pow(std::abs(x), p); };
  c.dphi = [cst, p](double x) { return cst * p * sgn(x) * std::pow(std::abs(x), p - 1.0); };
  // |a^b - b'^b| <= |a-b'|^b on one side, 2^{1-b}(a+b')^b across 0.
  double beta = p - 1.0;
  c.modulus = power_modulus(beta, cst * p * std::pow(2.0, 1.0 - beta));
  c.R0 = R0;
  return c;
}

ChartCheck check_chart(const BoundaryChart& chart, int pairs, unsigned long long seed) {
  ChartCheck out;
  out.normalized = std::abs(chart.phi(0.0)) <= 1e-15 && std::abs(chart.dphi(0.0)) <= 1e-15;
  Rng rng(seed);
  const double R = chart.R0;
  for (int i = 0; i < pairs; ++i) {
    double a = rng.uniform(-R, R), b = rng.uniform(-R, R);
    double da = chart.dphi(a), db = chart.dphi(b);
    double psi = chart.modulus.psi(std::abs(a - b));
    double diff = std::abs(da - db);
    double ratio = psi > 0 ? diff / psi : (diff > 0 ? HUGE_VAL : 0.0);
    out.max_modulus_ratio = std::max(out.max_modulus_ratio, ratio);
    out.max_slope_factor = std::max(out.max_slope_factor, std::sqrt(1.0 + da * da));
  }
  for (double x : {-R, R}) {
    double d = chart.dphi(x);
    out.max_slope_factor = std::max(out.max_slope_factor, std::sqrt(1.0 + d * d));
  }
  out.pass = out.normalized && out.max_modulus_ratio <= 1.0 + 1e-12 &&
             out.max_slope_factor <= 1.5;
  return out;
}

Vec2 normal_at(const BoundaryChart& chart, double xprime) {
  if (!(std::abs(xprime) <= chart.R0))
    throw DomainError("normal_at: point outside the chart");
  double g = chart.dphi(xprime);
  double s = std::sqrt(1.0 + g * g);
  return {-g / s, 1.0 / s};
}

double k_constant(double K1) {
  if (K1 < 0) throw DomainError("K1 must be nonnegative");
  double K = std::max(K1, 0.5);
  double K2 = 1.0 + K;
  return 8.0 * K2 * (K2 / K + 3.0);
}

double lambda_cap(double K1) {
  return std::min(1.0 / (24.0 * K1 + 64.0 * k_constant(K1)), kLambdaCeiling);
}

DiniDomain::DiniDomain(BoundaryChart chart, double K1)
    : chart_(std::move(chart)), K1_(K1), k_(k_constant(K1)), cap_(lambda_cap(K1)) {
  if (!(chart_.R0 > 0.0)) throw DomainError("chart radius must be positive");
  const double top = sample_limit();
  scales_.push_back(top);
  int j = static_cast<int>(std::ceil(-std::log2(top)));
  if (std::ldexp(1.0, -j) >= top) ++j;
  const int levels = 96;
  for (int i = 0; i < levels; ++i) scales_.push_back(std::ldexp(1.0, -(j + i)));

  std::vector<double> raw(scales_.size());
  for (size_t i = 0; i < scales_.size(); ++i) raw[i] = sampled_oscillation(scales_[i]);
  dev_ = raw;
  for (size_t i = dev_.size() - 1; i-- > 0;) dev_[i] = std::max(dev_[i], dev_[i + 1]);

  double s_ceiling = 0.0, s_cap = 0.0;
  for (size_t i = 1; i < scales_.size(); ++i) {
    double lam = std::max(dev_[i], std::sqrt(scales_[i]));
    if (s_ceiling == 0.0 && lam < kLambdaCeiling) s_ceiling = scales_[i];
    if (s_cap == 0.0 && lam <= cap_) s_cap = scales_[i];
  }
  if (s_ceiling == 0.0 || s_cap == 0.0)
    throw DomainError("no cached radius satisfies the Lambda restrictions");
  R0_eff_ = std::min(s_ceiling, s_cap);
  if (s_cap < s_ceiling) binding_ = "cap";
  else if (s_ceiling < s_cap) binding_ = "ceiling";
  else binding_ = "both";
}

std::pair<double, double> DiniDomain::boundary_extent(double r) const {
  const double xmax = std::min(r, sample_limit());
  auto side = [&](double dir) {
    auto g = [&](double t) {
      double x = dir * t;
      double p = chart_.phi(x);
      return x * x + p * p - r * r;
    };
    if (g(xmax) <= 0.0) return xmax;
    return bisect(g, 0.0, xmax, 1e-15 * r);
  };
  return {-side(-1.0), side(1.0)};
}

double DiniDomain::sampled_oscillation(double r, int samples) const {
  auto [lo, hi] = boundary_extent(r);
  double tmin = HUGE_VAL, tmax = -HUGE_VAL;
  for (int i = 0; i < samples; ++i) {
    double x = lo + (hi - lo) * i / (samples - 1);
    double t = std::atan(chart_.dphi(x));
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  return 2.0 * std::sin(0.5 * (tmax - tmin));
}

double DiniDomain::lambda_sampled(double r) const {
  if (!(r > 0.0) || r > scales_.front())
    throw DomainError("radius outside the sampled range of Lambda");
  // Smallest cached scale >= r (scales decrease).
  size_t idx = 0;
  for (size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] >= r) idx = i;
    else break;
  }
  return std::max(dev_[idx], std::sqrt(r));
}

double DiniDomain::lambda_of(double r) const {
  if (!(r > 0.0) || r > R0_eff_ * (1.0 + 1e-12))
    throw DomainError("lambda_of: radius must lie in (0, R0_effective]");
  return lambda_sampled(std::min(r, R0_eff_));
}

Vec2 interior_anchor(const DiniDomain& d, double r) {
  double lam = d.lambda_of(r);
  return {0.0, -4.0 * (lam * r)};
}

MarginReport star_shape_margin_at(const DiniDomain& d, double r, double lam, int samples) {
  if (samples < 16) throw DomainError("star_shape_margin needs at least 16 samples");
  if (!(r > 0.0) || r > d.sample_limit()) throw DomainError("radius outside the chart");
  const Vec2 y0{0.0, -4.0 * (lam * r)};
  const double denom = lam * r;
  auto [lo, hi] = d.boundary_extent(r);
  if (!(hi > lo)) throw DomainError("degenerate boundary sampling");
  MarginReport out;
  out.min = HUGE_VAL;
  out.max = -HUGE_VAL;
  const auto& ch = d.chart();
  for (int i = 0; i < samples; ++i) {
    double xp = lo + (hi - lo) * i / (samples - 1);
    Vec2 x{xp, ch.phi(xp)};
    double v = dot(x - y0, normal_at(ch, xp)) / denom;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
    ++out.samples_used;
  }
  out.pass = out.min >= 0.5 && out.max <= 10.0;
  return out;
}

MarginReport star_shape_margin(const DiniDomain& d, double r, int samples) {
  double lam = d.lambda_of(r);
  return star_shape_margin_at(d, r, lam, samples);
}

GeneralizedMargin generalized_star_margin(const DiniDomain& d, const CoefficientField& coeff,
                                          double r, int samples) {
  if (samples < 16) throw DomainError("generalized_star_margin needs at least 16 samples");
  const Vec2 y0 = interior_anchor(d, r);
  const double a = -y0.y;
  const NormalizationFrame frame = make_frame(coeff, y0);
  const CoefficientField Ay0 = push_matrix(coeff, frame);
  const double rad = std::sqrt(coeff.lambda) * (r - a);
  auto [lo, hi] = d.boundary_extent(r);
  const auto& ch = d.chart();
  GeneralizedMargin out;
  out.min = HUGE_VAL;
  out.scale = r * r;
  for (int i = 0; i < samples; ++i) {
    double xp = lo + (hi - lo) * i / (samples - 1);
    Vec2 x{xp, ch.phi(xp)};
    Vec2 y = frame.forward(x);
    if (!(norm(y) < rad)) continue;
    Vec2 N = frame.S * normal_at(ch, xp);
    N = N / norm(N);
    out.min = std::min(out.min, dot(Ay0(y) * y, N));
    ++out.samples_used;
  }
  if (out.samples_used == 0) throw DomainError("no boundary samples inside the transformed ball");
  out.pass = out.min >= -1e-12 * out.scale;
  return out;
}

}  // namespace dini
