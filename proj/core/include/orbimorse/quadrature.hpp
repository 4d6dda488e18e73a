#pragma once

#include <vector>

namespace orbimorse {

// Gauss-Legendre rule on [lo, hi].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1]; nodes ascending.
// Newton iteration on P_n from Chebyshev-like initial guesses.
QuadratureRule gauss_legendre(int n);

QuadratureRule gauss_legendre(int n, double lo, double hi);

// Periodic trapezoid rule with n points on [lo, hi).
QuadratureRule periodic_trapezoid(int n, double lo, double hi);

}  // namespace orbimorse
