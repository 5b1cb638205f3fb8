#pragma once

#include <functional>
#include <vector>

namespace dini {

// Gauss-Legendre rule on (-1, 1); cached, thread-safe.
struct UnitRule {
  std::vector<double> x, w;
};
const UnitRule& gauss_legendre_unit(int m);

// Root of f in [a, b] (f(a), f(b) of opposite sign or zero) to absolute width tol.
double bisect(const std::function<double(double)>& f, double a, double b, double tol,
              int max_iter = 200);

// Integral over [0, X] of a function that is smooth on dyadic pieces away from 0:
// panels [X 2^{-k-1}, X 2^{-k}] for k < levels, 8-point Gauss-Legendre each.
double integrate_dyadic(const std::function<double(double)>& f, double X, int levels = 60);

}  // namespace dini
