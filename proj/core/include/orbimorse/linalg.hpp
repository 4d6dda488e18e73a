#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace orbimorse {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues and a
// deterministic phase convention on the eigenvectors: the first entry of
// largest modulus in each column is made real and positive.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

HermitianEigen hermitian_eigen(const CMatrix& m);

// Max-norm distance to the Hermitian part; zero for Hermitian input.
double hermitian_defect(const CMatrix& m);

// Distance of m^* m from the identity in max norm.
double unitarity_defect(const CMatrix& m);

// Applies a real scalar function to a Hermitian matrix through its
// eigen-decomposition.
template <class F>
CMatrix hermitian_function(const HermitianEigen& eig, F&& f) {
  const Eigen::Index n = eig.values.size();
  CVector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

// Numerical rank from singular values above rel_tol * max singular value.
int numerical_rank(const CMatrix& m, double rel_tol);
int numerical_rank(const RMatrix& m, double rel_tol);

// e_q(x_1, ..., x_n): the q-th elementary symmetric polynomial.
template <class T>
T elementary_symmetric(const std::vector<T>& x, int q) {
  const int n = static_cast<int>(x.size());
  if (q < 0 || q > n) return T(0);
  std::vector<T> e(static_cast<size_t>(n) + 1, T(0));
  e[0] = T(1);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k >= 1; --k) e[k] += e[k - 1] * x[j];
  }
  return e[q];
}

}  // namespace orbimorse
