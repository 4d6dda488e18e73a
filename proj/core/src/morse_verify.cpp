#include "orbimorse/morse_verify.hpp"

#include <cmath>
#include <limits>

#include "orbimorse/errors.hpp"
#include "orbimorse/model_kernels.hpp"
#include "orbimorse/torus_kernel.hpp"

namespace orbimorse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_q(int q) { return q % 2 == 0 ? 1.0 : -1.0; }

std::vector<Complex> diagonal_of(const CMatrix& m) {
  std::vector<Complex> d;
  for (Eigen::Index j = 0; j < m.rows(); ++j) d.push_back(m(j, j));
  return d;
}

void require_local(const CatalogModel& model) {
  if (model.orbifold.kind != ModelKind::LocalModel)
    throw UnsupportedModelError("this check needs a local model C^n/Z_k");
}

// e^{i p theta_g} tr(g^E) times the form-twisted prefactor
Complex group_coefficient(const CatalogModel& model, const GroupElement& g, int p, double u, int q) {
  const Complex phase = std::polar(1.0, p * g.line_phase);
  return phase * g.aux_action.trace() * model_kernel_prefactor(model.spec.a, u, q, diagonal_of(g.matrix));
}

}  // namespace

RateFit fit_convergence_order(const std::vector<double>& p, const std::vector<double>& log_err,
                              double log_floor) {
  if (p.size() != log_err.size()) throw DomainError("fit_convergence_order: size mismatch");
  RateFit fit;
  int best_first = -1, best_len = 0;
  int cur_first = -1;
  for (int i = 0; i <= static_cast<int>(p.size()); ++i) {
    const bool ok = i < static_cast<int>(p.size()) && std::isfinite(log_err[static_cast<size_t>(i)]) &&
                    log_err[static_cast<size_t>(i)] > log_floor;
    if (ok && cur_first < 0) cur_first = i;
    if (!ok && cur_first >= 0) {
      if (i - cur_first > best_len) {
        best_len = i - cur_first;
        best_first = cur_first;
      }
      cur_first = -1;
    }
  }
  if (best_len < 2) {
    fit.below_floor = best_len == 0;
    return fit;
  }
  fit.first = best_first;
  fit.last = best_first + best_len - 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = fit.first; i <= fit.last; ++i) {
    const double x = std::log(p[static_cast<size_t>(i)]);
    const double y = log_err[static_cast<size_t>(i)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = best_len;
  const double den = m * sxx - sx * sx;
  if (den <= 0.0) return fit;
  fit.slope = (m * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / m;
  const double ybar = sy / m;
  double ss_tot = 0, ss_res = 0;
  for (int i = fit.first; i <= fit.last; ++i) {
    const double x = std::log(p[static_cast<size_t>(i)]);
    const double y = log_err[static_cast<size_t>(i)];
    ss_tot += (y - ybar) * (y - ybar);
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.reliable = fit.r2 >= 0.9;
  return fit;
}

double strong_rhs(const MorseIntegralTable& integrals, int q, int aux_rank) {
  return aux_rank * sign_q(q) * integrals.up_to(q);
}

double weak_rhs(const MorseIntegralTable& integrals, int q, int aux_rank) {
  return aux_rank * sign_q(q) * integrals.over({q});
}

double telescoping_defect(const MorseIntegralTable& integrals, int q, int aux_rank) {
  const double prev = q > 0 ? strong_rhs(integrals, q - 1, aux_rank) : 0.0;
  return strong_rhs(integrals, q, aux_rank) + prev - weak_rhs(integrals, q, aux_rank);
}

StrongMorseSeries verify_strong_morse(const CohomologyTable& table,
                                      const MorseIntegralTable& integrals, int q, int aux_rank,
                                      double tol_quadrature) {
  const int n = table.n;
  if (q < 0 || q > n) throw DomainError("verify_strong_morse: q outside 0..n");
  if (static_cast<int>(integrals.by_q.size()) != n + 1)
    throw DomainError("verify_strong_morse: integral table has the wrong dimension");
  StrongMorseSeries s;
  s.q = q;
  s.degenerate_fraction = integrals.degenerate_fraction;
  const double rhs = strong_rhs(integrals, q, aux_rank);
  for (int p : table.p_values) {
    const std::vector<long long> h = table.column(p);
    double alt = 0.0;
    for (int j = 0; j <= q; ++j) alt += sign_q(q - j) * double(h[static_cast<size_t>(j)]);
    StrongMorsePoint pt;
    pt.p = p;
    pt.lhs = alt / std::pow(double(p), n);
    pt.rhs = rhs;
    pt.residual = pt.lhs - pt.rhs;
    pt.tolerance = tol_quadrature;
    s.points.push_back(pt);
  }
  const size_t m = s.points.size();
  if (m >= 2) {
    if (q < n) {
      // positive parts along the tail must not grow
      for (size_t i = m / 2; i + 1 < m; ++i) {
        const double a = std::max(s.points[i].residual, 0.0);
        const double b = std::max(s.points[i + 1].residual, 0.0);
        if (b > a + tol_quadrature) {
          s.consistent = false;
          s.note = "positive part of the residual grows at p=" + std::to_string(s.points[i + 1].p);
        }
      }
    } else if (std::abs(s.points.back().residual) > std::abs(s.points.front().residual) + tol_quadrature) {
      s.consistent = false;
      s.note = "equality residual at q=n does not decay";
    }
  }
  return s;
}

StrongMorseSeries verify_strong_morse(const CatalogModel& model, int q,
                                      const std::vector<int>& p_list, int resolution,
                                      double tol_degeneracy, int spectral_resolution,
                                      double tol_quadrature) {
  const CohomologyTable table = cohomology_table(model, p_list, spectral_resolution);
  const MorseIntegralTable integrals =
      morse_integral_table(model.orbifold, model.bundle, resolution, tol_degeneracy);
  return verify_strong_morse(table, integrals, q, model.bundle.aux_rank, tol_quadrature);
}

Complex local_model_image_sum(const CatalogModel& model, int p, double u, const CVector& z, int q) {
  require_local(model);
  const auto& chart = model.orbifold.charts[0];
  const double sp = std::sqrt(double(p));
  Complex s = 0.0;
  for (const auto& g : chart.group) {
    const CVector moved = sp * (g.matrix.adjoint() * z);
    const Complex e = model_kernel_exponent(model.spec.a, u, moved, sp * z);
    s += group_coefficient(model, g, p, u, q) * std::exp(e);
  }
  return s;
}

RegularAsymptotics verify_kernel_asymptotics_regular(const CatalogModel& model, int chart,
                                                     const CVector& x, double u,
                                                     const std::vector<int>& p_list, double delta,
                                                     int q) {
  if (!(u > 0.0)) throw DomainError("u must be positive");
  RegularAsymptotics out;
  out.distance = model.orbifold.singular_locus_fn(chart, x);
  if (out.distance < delta) {
    throw DomainError("point is too close to the singular locus: distance " +
                      std::to_string(out.distance) + " < " + std::to_string(delta));
  }
  const double log_rank = std::log(double(model.bundle.aux_rank));
  std::vector<double> ps, logs;
  for (int p : p_list) {
    std::vector<LogComplex> terms;
    if (model.orbifold.kind == ModelKind::LocalModel) {
      const auto& group = model.orbifold.charts[0].group;
      const double sp = std::sqrt(double(p));
      for (size_t i = 1; i < group.size(); ++i) {
        const Complex c = group_coefficient(model, group[i], p, u, q);
        if (std::abs(c) == 0.0) continue;
        const CVector moved = sp * (group[i].matrix.adjoint() * x);
        const Complex e = model_kernel_exponent(model.spec.a, u, moved, sp * x);
        terms.push_back({std::log(std::abs(c)) + e.real(), std::arg(c) + e.imag()});
      }
    } else if (model.orbifold.kind == ModelKind::TorusQuotient) {
      if (q != 0) throw UnsupportedModelError("torus kernel asymptotics use q = 0");
      const Complex xc = x(0);
      TorusImageSum direct = torus_kernel_images(model, p, u, xc, xc);
      terms = direct.others;
      if (model.spec.k == 2) {
        TorusImageSum refl = torus_kernel_images(model, p, u, -xc, xc);
        terms.insert(terms.end(), refl.others.begin(), refl.others.end());
        terms.push_back(refl.identity_log);
      }
    } else {
      throw UnsupportedModelError("kernel asymptotics need a flat model with an image-sum oracle");
    }
    for (auto& t : terms) t.log_abs += log_rank;
    KernelRecord rec;
    rec.p = p;
    rec.u = u;
    rec.log_error = log_abs_sum(terms);
    rec.error = std::exp(rec.log_error);
    out.records.push_back(rec);
    ps.push_back(p);
    logs.push_back(rec.log_error);
  }
  // errors here are closed-form sums of image terms, not differences
  out.fit = fit_convergence_order(ps, logs, -kInf);
  double c = 0.0;
  for (size_t i = 0; i < std::min<size_t>(2, out.records.size()); ++i)
    c = std::max(c, out.records[i].error * std::sqrt(double(out.records[i].p)));
  for (auto& r : out.records) r.predicted_bound = c / std::sqrt(double(r.p));
  out.pass = out.fit.below_floor || (out.fit.first >= 0 && out.fit.slope <= -0.4);
  return out;
}

SingularAsymptotics verify_kernel_asymptotics_singular(const CatalogModel& model,
                                                       const CVector& z, double u,
                                                       const std::vector<int>& p_list,
                                                       bool scaled, int q) {
  require_local(model);
  if (!(u > 0.0)) throw DomainError("u must be positive");
  const auto& group = model.orbifold.charts[0].group;
  const double eps = model.spec.radius;
  SingularAsymptotics out;
  for (int p : p_list) {
    const double sp = std::sqrt(double(p));
    const CVector zp = scaled ? CVector(z / sp) : z;
    if (zp.norm() >= eps / 2.0) throw DomainError("point must satisfy |Z| < radius / 2");
    SingularRecord r;
    r.p = p;
    r.z = zp;
    r.oracle = local_model_image_sum(model, p, u, zp, q).real();
    const Complex lim = group_coefficient(model, group[0], p, u, q);
    r.lim = lim.real();
    Complex corrected = r.oracle - lim;
    for (size_t i = 1; i < group.size(); ++i) {
      ModelPointData data;
      data.a = model.spec.a;
      data.u = u;
      data.g = group[i].matrix;
      // flat model: kappa = 1 and Lim_u is constant along the fixed set
      corrected -= group_coefficient(model, group[i], p, u, q) * gaussian_twist(data, sp * zp);
    }
    r.naive_residual = std::abs(r.oracle - r.lim);
    r.corrected_residual = std::abs(corrected);
    out.records.push_back(r);
  }
  double c = 0.0;
  for (size_t i = 0; i < std::min<size_t>(2, out.records.size()); ++i)
    c = std::max(c, out.records[i].corrected_residual * std::sqrt(double(out.records[i].p)));
  out.envelope_constant = c;
  out.min_shrink = kInf;
  for (auto& r : out.records) {
    r.envelope = c / std::sqrt(double(r.p));
    if (r.corrected_residual > r.envelope * (1.0 + 1e-9) + 1e-14) out.within_envelope = false;
    const double shrink = r.corrected_residual > 0.0 ? r.naive_residual / r.corrected_residual : kInf;
    out.min_shrink = std::min(out.min_shrink, shrink);
  }
  return out;
}

DiagonalFactor singular_diagonal_factor(const CatalogModel& model, double u, int p, int q) {
  require_local(model);
  const int n = model.orbifold.dimension;
  const CVector zero = CVector::Zero(n);
  const Complex kernel = local_model_image_sum(model, p, u, zero, q);
  const Complex lim = group_coefficient(model, model.orbifold.charts[0].group[0], p, u, q);
  DiagonalFactor f;
  f.ratio = (kernel / lim).real();
  f.expected = static_cast<int>(model.orbifold.charts[0].group.size());
  f.deviation = std::abs(f.ratio - f.expected);
  return f;
}

}  // namespace orbimorse
