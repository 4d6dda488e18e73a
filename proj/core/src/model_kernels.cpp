#include "orbimorse/model_kernels.hpp"

#include <cmath>
#include <numbers>

#include "orbimorse/errors.hpp"

namespace orbimorse {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// the series is used only while u*a is small enough for x^6/30240 to vanish
constexpr double kSeriesArgMax = 0.05;

double bernoulli_series(double x) {
  const double x2 = x * x;
  return 1.0 + x / 2.0 + x2 / 12.0 - x2 * x2 / 720.0;
}
}  // namespace

void ModelPointData::validate() const {
  if (!(u > 0.0)) throw DomainError("u must be positive");
  if (aux_rank < 1) throw DomainError("aux_rank must be >= 1");
  for (double x : a) {
    if (!std::isfinite(x)) throw DomainError("eigenvalues must be finite");
  }
  if (g) {
    const int n = dimension();
    if (g->rows() != n || g->cols() != n) throw DomainError("group block has wrong size");
    if (unitarity_defect(*g) > 1e-12) throw DomainError("group block is not unitary");
    CMatrix ra = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) ra(j, j) = a[j];
    if ((ra * *g - *g * ra).cwiseAbs().maxCoeff() > 1e-10)
      throw DomainError("group block does not commute with R-dot");
  }
}

double bernoulli_factor(double x) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) < 1e-3) return bernoulli_series(x);
  return x / (-std::expm1(-x));
}

double lim_factor_direct(double a, double u) { return a / (-std::expm1(-u * a)); }

double lim_factor(double a, double u) {
  if (std::abs(a) <= kZeroModeTol) return 1.0 / u;
  const double x = u * a;
  if (std::abs(a) <= kSeriesWindow && std::abs(x) <= kSeriesArgMax) return bernoulli_series(x) / u;
  return lim_factor_direct(a, u);
}

double lim_factor_shifted(double a, double u) {
  if (std::abs(a) <= kZeroModeTol) return 1.0 / u;
  const double x = u * a;
  if (std::abs(a) <= kSeriesWindow && std::abs(x) <= kSeriesArgMax) return bernoulli_series(-x) / u;
  return a / std::expm1(x);
}

double trace_q_exp_omega(const std::vector<double>& a, double u, int q) {
  const int n = static_cast<int>(a.size());
  if (q < 0 || q > n) throw DomainError("trace_q_exp_omega: q outside 0..n");
  std::vector<double> x(a.size());
  for (size_t j = 0; j < a.size(); ++j) x[j] = std::exp(-u * a[j]);
  return elementary_symmetric(x, q);
}

std::vector<std::vector<int>> multi_indices(int n, int q) {
  std::vector<std::vector<int>> out;
  if (q < 0 || q > n) return out;
  std::vector<int> j(static_cast<size_t>(q));
  for (int i = 0; i < q; ++i) j[i] = i;
  while (true) {
    out.push_back(j);
    int i = q - 1;
    while (i >= 0 && j[i] == n - q + i) --i;
    if (i < 0) break;
    ++j[i];
    for (int m = i + 1; m < q; ++m) j[m] = j[m - 1] + 1;
  }
  return out;
}

Complex model_kernel_prefactor(const std::vector<double>& a, double u, int q,
                               const std::vector<Complex>& gamma) {
  const int n = static_cast<int>(a.size());
  if (q < 0 || q > n) throw DomainError("degree q outside 0..n");
  if (!gamma.empty() && static_cast<int>(gamma.size()) != n)
    throw DomainError("form action must have n entries");
  // e[k] = sum over |J| = k of the mixed products, built one direction at a time
  std::vector<Complex> e(static_cast<size_t>(n) + 1, Complex(0.0));
  e[0] = 1.0;
  for (int j = 0; j < n; ++j) {
    const double out = lim_factor(a[j], u);
    const Complex in = lim_factor_shifted(a[j], u) * (gamma.empty() ? Complex(1.0) : gamma[j]);
    for (int k = j + 1; k >= 1; --k) e[k] = e[k] * out + e[k - 1] * in;
    e[0] *= out;
  }
  return e[static_cast<size_t>(q)] / std::pow(kTwoPi, n);
}

double lim_u(const ModelPointData& data, int q) {
  data.validate();
  return model_kernel_prefactor(data.a, data.u, q).real() * data.aux_rank;
}

RVector lim_u_form_diagonal(const ModelPointData& data, int q) {
  data.validate();
  const int n = data.dimension();
  const auto js = multi_indices(n, q);
  if (js.empty()) throw DomainError("degree q outside 0..n");
  RVector d(static_cast<Eigen::Index>(js.size()));
  for (size_t i = 0; i < js.size(); ++i) {
    double v = 1.0 / std::pow(kTwoPi, n);
    size_t pos = 0;
    for (int j = 0; j < n; ++j) {
      const bool in = pos < js[i].size() && js[i][pos] == j;
      if (in) ++pos;
      v *= in ? lim_factor_shifted(data.a[j], data.u) : lim_factor(data.a[j], data.u);
    }
    d(static_cast<Eigen::Index>(i)) = v;
  }
  return d;
}

namespace {

// F1(x) = (x/2) coth(u x/2), F2(x) = (x/2) e^{u x/2} / sinh(u x/2)
double f1(double x, double u) { return 0.5 * (lim_factor(x, u) + lim_factor(-x, u)); }
double f2(double x, double u) { return lim_factor(x, u); }

Complex pairing(const CMatrix& f_plus, const CMatrix& f_minus, const CVector& w, const CVector& z) {
  const Complex first = z.dot(f_plus * w);    // z^* f(R) w
  const Complex second = z.dot(f_minus * w);  // z^* f(-R) w
  return 0.5 * (first + std::conj(second));
}

}  // namespace

Complex gaussian_twist(const CMatrix& rdot, const CMatrix& g, double u, const CVector& z) {
  if (!(u > 0.0)) throw DomainError("u must be positive");
  const HermitianEigen eig = hermitian_eigen(rdot);
  const CMatrix f1p = hermitian_function(eig, [u](double x) { return f1(x, u); });
  const CMatrix f1m = hermitian_function(eig, [u](double x) { return f1(-x, u); });
  const CMatrix f2p = hermitian_function(eig, [u](double x) { return f2(x, u); });
  const CMatrix f2m = hermitian_function(eig, [u](double x) { return f2(-x, u); });
  const CVector ginv_z = g.adjoint() * z;
  const Complex exponent = -pairing(f1p, f1m, z, z) + pairing(f2p, f2m, ginv_z, z);
  return std::exp(exponent);
}

Complex gaussian_twist(const ModelPointData& data, const CVector& z) {
  data.validate();
  if (!data.g) throw DomainError("gaussian_twist needs a group element");
  const int n = data.dimension();
  if (z.size() != n) throw DomainError("gaussian_twist: dimension mismatch");
  CMatrix rdot = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) rdot(j, j) = data.a[j];
  return gaussian_twist(rdot, *data.g, data.u, z);
}

Complex model_kernel_exponent(const std::vector<double>& a, double u, const CVector& z,
                              const CVector& zp) {
  Complex e = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const double dist2 = std::norm(z(i) - zp(i));
    const double im = (z(i) * std::conj(zp(i))).imag();
    e += Complex(-0.5 * f1(a[j], u) * dist2, 0.5 * a[j] * im);
  }
  return e;
}

CMatrix model_heat_kernel(const ModelPointData& data, int q, const CVector& z, const CVector& zp) {
  data.validate();
  const int n = data.dimension();
  if (z.size() != n || zp.size() != n) throw DomainError("model_heat_kernel: dimension mismatch");
  const CVector moved = data.g ? CVector(data.g->adjoint() * z) : z;
  const Complex phase = std::exp(model_kernel_exponent(data.a, data.u, moved, zp));
  const RVector diag = lim_u_form_diagonal(data, q);
  return (phase * diag.cast<Complex>()).asDiagonal();
}

double limit_u_infinity(const std::vector<double>& a, int q) {
  const int n = static_cast<int>(a.size());
  if (q < 0 || q > n) throw DomainError("limit_u_infinity: q outside 0..n");
  int neg = 0;
  double prod = 1.0;
  for (double x : a) {
    if (std::abs(x) <= kZeroModeTol)
      throw DomainError("limit_u_infinity: degenerate eigenvalue, limit undefined");
    if (x < 0.0) ++neg;
    prod *= x / kTwoPi;
  }
  if (neg != q) return 0.0;
  return (q % 2 == 0 ? 1.0 : -1.0) * prod;
}

}  // namespace orbimorse
