#pragma once

#include <optional>
#include <vector>

#include "orbimorse/catalog.hpp"

namespace orbimorse {

inline constexpr double kDefaultDegeneracyTol = 1e-8;

struct CurvatureSpectrum {
  int chart = 0;
  CVector point;
  std::vector<double> eigenvalues;  // ascending
  std::optional<int> signature;     // empty means degenerate
};

// R-dot = G^{-1} R written in the orthonormal frame G = L L^*, i.e.
// L^{-1} R L^{-*}, which is Hermitian.
CMatrix curvature_endomorphism(const EquivariantLineBundle& bundle, const ChartedOrbifold& orb,
                               int chart, const CVector& x);

CurvatureSpectrum curvature_spectrum(const EquivariantLineBundle& bundle,
                                     const ChartedOrbifold& orb, int chart, const CVector& x,
                                     double tol = kDefaultDegeneracyTol);

// Number of negative eigenvalues, or empty when some |a_j| <= tol.
std::optional<int> classify_point(const std::vector<double>& eigenvalues, double tol);
std::optional<int> classify_point(const CurvatureSpectrum& spec, double tol);

struct MorseIntegral {
  double value = 0.0;
  double degenerate_fraction = 0.0;  // share of quadrature nodes classified degenerate
  std::size_t nodes = 0;
};

// Integral of det(R-dot / 2 pi) dv_M over {x : q(x) in q_set}.
MorseIntegral morse_integral(const ChartedOrbifold& orb, const EquivariantLineBundle& bundle,
                             const std::vector<int>& q_set, int resolution,
                             double tol = kDefaultDegeneracyTol);

// The integrals over each M(q), q = 0..n, from a single pass over the nodes.
struct MorseIntegralTable {
  std::vector<double> by_q;  // size n + 1
  double degenerate_fraction = 0.0;
  std::size_t nodes = 0;

  double over(const std::vector<int>& q_set) const;
  double up_to(int q) const;
};

MorseIntegralTable morse_integral_table(const ChartedOrbifold& orb,
                                        const EquivariantLineBundle& bundle, int resolution,
                                        double tol = kDefaultDegeneracyTol);

}  // namespace orbimorse
