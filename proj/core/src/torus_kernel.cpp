#include "orbimorse/torus_kernel.hpp"

#include <cmath>
#include <numbers>

#include "orbimorse/errors.hpp"
#include "orbimorse/model_kernels.hpp"
#include "orbimorse/spectral.hpp"

namespace orbimorse {

namespace {

constexpr double kPi = std::numbers::pi;

void require_torus_line(const CatalogModel& model) {
  if (model.orbifold.kind != ModelKind::TorusQuotient)
    throw UnsupportedModelError("torus kernel needs a torus catalog entry");
  if (model.orbifold.dimension != 1)
    throw UnsupportedModelError("torus kernel is implemented for n = 1");
  if (model.spec.k != 1 && model.spec.k != 2)
    throw UnsupportedModelError("torus kernel supports k = 1 or 2");
  if (model.spec.degrees[0] == 0)
    throw UnsupportedModelError("torus kernel needs a nonzero degree");
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

double log_abs_sum(const std::vector<LogComplex>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) top = std::max(top, t.log_abs);
  if (!std::isfinite(top)) return top;
  Complex s = 0.0;
  for (const auto& t : terms) s += std::polar(std::exp(t.log_abs - top), t.phase);
  if (std::abs(s) == 0.0) return -std::numeric_limits<double>::infinity();
  return top + std::log(std::abs(s));
}

TorusImageSum torus_kernel_images(const CatalogModel& model, int p, double u, Complex xp,
                                  Complex x) {
  require_torus_line(model);
  if (p < 1 || !(u > 0.0)) throw DomainError("torus kernel: need p >= 1 and u > 0");
  const double a = 2.0 * kPi * model.spec.degrees[0];
  const double omega = a * p;
  const double sp = std::sqrt(double(p));
  const std::vector<double> av{a};
  const double log_pref = std::log(std::abs(model_kernel_prefactor(av, u, 0).real()));
  // K_L(r', r) = e^{-i chi(r')} K_S(r', r) e^{i chi(r)}, chi = omega x y / 2,
  // with the symmetric-gauge kernel p * Mehler(sqrt(p) r', sqrt(p) r)
  auto chi = [omega](Complex r) { return 0.5 * omega * r.real() * r.imag(); };
  const double f1 = 0.5 * (lim_factor(a, u) + lim_factor(-a, u));
  const int range = static_cast<int>(std::ceil(std::sqrt(1600.0 / (f1 * p)))) + 2;
  TorusImageSum out;
  CVector zp(1), z(1);
  zp(0) = sp * xp;
  for (int m = -range; m <= range; ++m) {
    for (int l = -range; l <= range; ++l) {
      const Complex r = x + Complex(m, l);
      z(0) = sp * r;
      const Complex e = model_kernel_exponent(av, u, zp, z);
      const double phase = e.imag() - chi(xp) + chi(r) - omega * l * x.real();
      LogComplex term{log_pref + e.real(), phase};
      const Complex value = std::polar(std::exp(term.log_abs), term.phase);
      out.total += value;
      if (m == 0 && l == 0) {
        out.identity = value;
        out.identity_log = term;
      } else out.others.push_back(term);
    }
  }
  return out;
}

Complex torus_kernel_spectral(const CatalogModel& model, int p, double u, Complex xp, Complex x,
                              int resolution) {
  require_torus_line(model);
  const int d = model.spec.degrees[0];
  const double omega = 2.0 * kPi * d * p;
  const int sectors = std::abs(d) * p;
  const SectorGrid grid = sector_grid(omega, resolution);
  const RMatrix dm = sector_differential(grid);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(dm.transpose() * dm);
  const RVector& lam = solver.eigenvalues();
  const RMatrix& vec = solver.eigenvectors();
  // psi_{j,m}(x, y) = sum_l e^{2 pi i (j + l N) x} F_m(y + j/N + l), F_m the
  // sinc interpolant of the m-th sector eigenvector
  auto interp = [&](Eigen::Index m, double y) {
    double s = 0.0;
    for (int i = 0; i < grid.nodes; ++i) s += vec(i, m) * sinc((y - grid.y[static_cast<size_t>(i)]) / grid.h);
    return s / std::sqrt(grid.h);
  };
  const double reach = grid.y.back() + grid.h;
  auto psi = [&](int j, Eigen::Index m, Complex r) {
    Complex s = 0.0;
    const double shift = double(j) / sectors;
    const int lmin = static_cast<int>(std::floor(-reach - r.imag() - shift)) - 1;
    const int lmax = static_cast<int>(std::ceil(reach - r.imag() - shift)) + 1;
    for (int l = lmin; l <= lmax; ++l) {
      const double arg = r.imag() + shift + l;
      s += std::polar(interp(m, arg), 2.0 * kPi * (j + double(l) * sectors) * r.real());
    }
    return s;
  };
  const double t = u / p;
  Complex total = 0.0;
  for (Eigen::Index m = 0; m < lam.size(); ++m) {
    const double w = std::exp(-t * std::max(lam(m), 0.0));
    if (w < 1e-18) continue;
    for (int j = 0; j < sectors; ++j) total += w * psi(j, m, xp) * std::conj(psi(j, m, x));
  }
  return total / double(p);
}

double torus_quotient_diagonal_images(const CatalogModel& model, int p, double u, Complex x) {
  require_torus_line(model);
  double s = torus_kernel_images(model, p, u, x, x).total.real();
  if (model.spec.k == 2) s += torus_kernel_images(model, p, u, -x, x).total.real();
  return s * model.bundle.aux_rank;
}

double torus_quotient_diagonal_spectral(const CatalogModel& model, int p, double u, Complex x,
                                        int resolution) {
  require_torus_line(model);
  double s = torus_kernel_spectral(model, p, u, x, x, resolution).real();
  if (model.spec.k == 2) s += torus_kernel_spectral(model, p, u, -x, x, resolution).real();
  return s * model.bundle.aux_rank;
}

}  // namespace orbimorse
