#pragma once

#include <optional>
#include <vector>

#include "orbimorse/linalg.hpp"

namespace orbimorse {

inline constexpr double kZeroModeTol = 1e-7;
inline constexpr double kSeriesWindow = 1e-4;

struct ModelPointData {
  std::vector<double> a;   // eigenvalues of R-dot at x, in the frame of the coordinates
  int aux_rank = 1;
  std::optional<CMatrix> g;  // group element on the normal directions
  double u = 1.0;

  int dimension() const { return static_cast<int>(a.size()); }
  void validate() const;
};

// B(x) = x / (1 - e^{-x}), B(0) = 1.
double bernoulli_factor(double x);

// a / (1 - e^{-u a}) with the zero-mode convention 1/u for |a| <= kZeroModeTol
// and a four-term series for |a| <= kSeriesWindow.
double lim_factor(double a, double u);
// a e^{-u a} / (1 - e^{-u a}) = a / (e^{u a} - 1), same conventions.
double lim_factor_shifted(double a, double u);
// Plain closed-form evaluation, no switching (reference for tests).
double lim_factor_direct(double a, double u);

// sum_{|J| = q} e^{-u sum_{j in J} a_j}
double trace_q_exp_omega(const std::vector<double>& a, double u, int q);

// Lexicographic increasing multi-indices J of size q in {0..n-1}.
std::vector<std::vector<int>> multi_indices(int n, int q);

// Scalar trace of Lim_u on Lambda^{0,q} (x) E.
double lim_u(const ModelPointData& data, int q);

// Diagonal of Lim_u on Lambda^{0,q}, one entry per multi_indices(n, q);
// the endomorphism is this diagonal tensored with Id_E.
RVector lim_u_form_diagonal(const ModelPointData& data, int q);

// Twisted Gaussian E_{g,x}(u, Z), evaluated through Hermitian matrix
// functions of R-dot with the doubled-spectrum real pairing
//   <f(R)W, Z> = 1/2 [ z^* f(R) w + conj(z^* f(-R) w) ].
// Complex in general; |value| <= 1 for R-dot >= 0.
Complex gaussian_twist(const ModelPointData& data, const CVector& z);
Complex gaussian_twist(const CMatrix& rdot, const CMatrix& g, double u, const CVector& z);

// Exponent of the Mehler kernel K_u(Z, Z') per eigen-direction:
//   -1/2 F1(a_j) |z_j - z'_j|^2 + i (a_j / 2) Im(z_j conj(z'_j)),
// F1(x) = (x/2) coth(u x / 2).
Complex model_kernel_exponent(const std::vector<double>& a, double u, const CVector& z,
                              const CVector& zp);

// (2 pi)^{-n} sum_{|J| = q} prod_{j in J} gamma_j a_j/(e^{u a_j}-1) prod_{j notin J} a_j/(1-e^{-u a_j}):
// the trace over Lambda^{0,q} of the form action gamma composed with the
// kernel at coinciding points. gamma empty means the identity.
Complex model_kernel_prefactor(const std::vector<double>& a, double u, int q,
                               const std::vector<Complex>& gamma = {});

// e^{-u L_0}(g^{-1} Z, Z') on Lambda^{0,q}: diagonal matrix over
// multi_indices(n, q), acting as identity on E.
CMatrix model_heat_kernel(const ModelPointData& data, int q, const CVector& z, const CVector& zp);

// (-1)^q 1[sig(a) = q] prod a_j / 2 pi. Throws DomainError for zero modes.
double limit_u_infinity(const std::vector<double>& a, int q);

}  // namespace orbimorse
