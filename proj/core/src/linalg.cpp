#include "orbimorse/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace orbimorse {

HermitianEigen hermitian_eigen(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
      // strict '>' keeps the first maximal entry; small slack absorbs rounding
      const double mag = std::abs(out.vectors(r, c));
      if (mag > best * (1.0 + 1e-12) + 1e-14) {
        best = mag;
        pivot = r;
      }
    }
    const Complex z = out.vectors(pivot, c);
    if (std::abs(z) > 0.0) out.vectors.col(c) *= std::conj(z) / std::abs(z);
  }
  return out;
}

double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& m) {
  const CMatrix d = m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

namespace {
template <class M>
int rank_from_svd(const M& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<M> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}
}  // namespace

int numerical_rank(const CMatrix& m, double rel_tol) { return rank_from_svd(m, rel_tol); }
int numerical_rank(const RMatrix& m, double rel_tol) { return rank_from_svd(m, rel_tol); }

}  // namespace orbimorse
