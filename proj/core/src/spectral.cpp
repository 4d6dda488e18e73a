#include "orbimorse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>

#include <unsupported/Eigen/KroneckerProduct>

#include "orbimorse/errors.hpp"

namespace orbimorse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMergeRel = 1e-9;
constexpr int kMaxDenseDim = 20000;

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

std::vector<Level> merge_levels(std::vector<Level> raw, double rel) {
  std::sort(raw.begin(), raw.end(),
            [](const Level& a, const Level& b) { return a.lambda < b.lambda; });
  std::vector<Level> out;
  for (const auto& l : raw) {
    if (l.multiplicity == 0) continue;
    if (!out.empty() &&
        std::abs(l.lambda - out.back().lambda) <= rel * std::max(1.0, std::abs(l.lambda))) {
      auto& b = out.back();
      const double m = double(b.multiplicity) + double(l.multiplicity);
      b.lambda = (b.lambda * double(b.multiplicity) + l.lambda * double(l.multiplicity)) / m;
      b.multiplicity += l.multiplicity;
    } else {
      out.push_back(l);
    }
  }
  return out;
}

RMatrix parity_basis(int size, bool even) {
  const int half = size / 2;
  const int cols = even ? half + (size % 2) : half;
  RMatrix p = RMatrix::Zero(size, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < half; ++i) {
    p(i, i) = s;
    p(size - 1 - i, i) = even ? s : -s;
  }
  if (even && size % 2 == 1) p(half, half) = 1.0;
  return p;
}

RMatrix reversal(int size) {
  RMatrix r = RMatrix::Zero(size, size);
  for (int i = 0; i < size; ++i) r(size - 1 - i, i) = 1.0;
  return r;
}

}  // namespace

long long SpectralTable::total_multiplicity() const {
  long long t = 0;
  for (const auto& l : levels) t += l.multiplicity;
  return t;
}

SpectralTable make_table(int p, int q, int resolution, std::vector<Level> raw, double gap_rel) {
  if (!(gap_rel > 0.0)) throw DomainError("spectral gap tolerance must be positive");
  SpectralTable t;
  t.p = p;
  t.q = q;
  t.resolution = resolution;
  std::vector<double> positive;
  for (const auto& l : raw) {
    if (l.lambda > 1e-8) positive.push_back(l.lambda);
  }
  double median = 0.0;
  if (!positive.empty()) {
    std::sort(positive.begin(), positive.end());
    median = positive[positive.size() / 2];
  }
  t.gap_threshold = std::max(1e-8, gap_rel * median);
  for (auto& l : raw) {
    if (l.lambda < t.gap_threshold) l.lambda = 0.0;
  }
  t.levels = merge_levels(std::move(raw), kMergeRel);
  for (const auto& l : t.levels) {
    if (l.lambda == 0.0) t.zero_dim += l.multiplicity;
  }
  return t;
}

SectorGrid sector_grid(double omega, int m) {
  if (omega == 0.0) throw DomainError("sector_grid: omega must be nonzero");
  if (m < 4) throw DomainError("sector_grid: need at least 4 nodes");
  SectorGrid g;
  g.omega = omega;
  g.nodes = m;
  const double half = 8.0 / std::sqrt(std::abs(omega));
  g.h = 2.0 * half / (m - 1);
  for (int i = 0; i < m; ++i) g.y.push_back((i - 0.5 * (m - 1)) * g.h);
  // interior staggered nodes for omega > 0, plus the two outer ones otherwise
  const int first = omega > 0 ? 0 : -1;
  const int last = omega > 0 ? m - 2 : m - 1;
  for (int k = first; k <= last; ++k) g.mid.push_back((k + 0.5 - 0.5 * (m - 1)) * g.h);
  return g;
}

RMatrix sector_differential(const SectorGrid& g) {
  const int m = g.nodes;
  const int rows = static_cast<int>(g.mid.size());
  const int first = g.omega > 0 ? 0 : -1;
  RMatrix d(rows, m);
  for (int r = 0; r < rows; ++r) {
    const int k = first + r;
    for (int i = 0; i < m; ++i) {
      const double s = k - i + 0.5;
      const double sgn = ((k - i) % 2 == 0) ? 1.0 : -1.0;
      const double interp = sgn / (kPi * s);
      const double deriv = -sgn / (kPi * g.h * s * s);
      d(r, i) = (deriv + g.omega * g.mid[static_cast<size_t>(r)] * interp) / std::sqrt(2.0);
    }
  }
  return d;
}

std::vector<double> eigenvalues(const RMatrix& symmetric) {
  if (symmetric.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetric, Eigen::EigenvaluesOnly);
  const RVector& v = solver.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

SectorSpectrum sector_spectrum(double omega, int m) {
  const SectorGrid grid = sector_grid(omega, m);
  const RMatrix d = sector_differential(grid);
  const RMatrix l0 = d.transpose() * d;
  const RMatrix l1 = d * d.transpose();
  SectorSpectrum s;
  s.all[0] = eigenvalues(l0);
  s.all[1] = eigenvalues(l1);
  const RMatrix e0 = parity_basis(static_cast<int>(l0.rows()), true);
  const RMatrix o0 = parity_basis(static_cast<int>(l0.rows()), false);
  const RMatrix e1 = parity_basis(static_cast<int>(l1.rows()), true);
  const RMatrix o1 = parity_basis(static_cast<int>(l1.rows()), false);
  s.parity[0][0] = eigenvalues(e0.transpose() * l0 * e0);
  s.parity[0][1] = eigenvalues(o0.transpose() * l0 * o0);
  // a (0,1)-form f dz-bar is invariant when f is odd
  s.parity[1][0] = eigenvalues(o1.transpose() * l1 * o1);
  s.parity[1][1] = eigenvalues(e1.transpose() * l1 * e1);
  return s;
}

FactorTable factor_table(int degree, int p, int k, int resolution) {
  if (k != 1 && k != 2) throw UnsupportedModelError("spectral assembly supports k = 1 or 2");
  if (p < 1) throw DomainError("p must be >= 1");
  FactorTable t;
  if (degree == 0) {
    // trivial bundle: plane waves, lambda = 2 pi^2 |m|^2 in both degrees
    const int kmax = resolution / 2;
    std::map<long long, long long> pairs;  // |m|^2 -> number of {m, -m} pairs
    for (int a = -kmax; a <= kmax; ++a) {
      for (int b = -kmax; b <= kmax; ++b) {
        if (a == 0 && b == 0) continue;
        if (a > 0 || (a == 0 && b > 0)) ++pairs[static_cast<long long>(a) * a + static_cast<long long>(b) * b];
      }
    }
    auto push = [&](int q, int par, double lam, long long mult) {
      t[q][par].push_back({lam, mult});
    };
    for (const auto& [r2, cnt] : pairs) {
      const double lam = 2.0 * kPi * kPi * double(r2);
      for (int q = 0; q < 2; ++q) {
        if (k == 1) {
          push(q, 0, lam, 2 * cnt);
        } else {
          push(q, 0, lam, cnt);
          push(q, 1, lam, cnt);
        }
      }
    }
    if (k == 1) {
      push(0, 0, 0.0, 1);
      push(1, 0, 0.0, 1);
    } else {
      push(0, 0, 0.0, 1);  // constants are even
      push(1, 1, 0.0, 1);  // dz-bar is odd
    }
    return t;
  }
  const double omega = 2.0 * kPi * degree * p;
  const long long sectors = static_cast<long long>(std::abs(degree)) * p;
  const SectorSpectrum s = sector_spectrum(omega, resolution);
  for (int q = 0; q < 2; ++q) {
    if (k == 1) {
      for (double lam : s.all[q]) t[q][0].push_back({lam, sectors});
      continue;
    }
    const long long fixed = (sectors % 2 == 0) ? 2 : 1;
    const long long pairs = (sectors - fixed) / 2;
    for (int par = 0; par < 2; ++par) {
      if (pairs > 0) {
        for (double lam : s.all[q]) t[q][par].push_back({lam, pairs});
      }
      for (double lam : s.parity[q][par]) t[q][par].push_back({lam, fixed});
    }
  }
  return t;
}

std::vector<SpectralTable> spectral_tables(const CatalogModel& model, int p, int resolution,
                                           double gap_rel) {
  if (model.orbifold.kind != ModelKind::TorusQuotient)
    throw UnsupportedModelError("spectral assembly is implemented for flat torus quotients only");
  const int k = model.spec.k;
  if (k != 1 && k != 2)
    throw UnsupportedModelError("spectral assembly supports torus quotients with k = 1 or 2");
  if (!is_power_of_two(resolution) || resolution < 8)
    throw DomainError("spectral resolution must be a power of two >= 8");
  if (p < 1) throw DomainError("p must be >= 1");
  const int n = model.orbifold.dimension;
  // Kunneth: combine directions one at a time, tracking degree and parity
  using Acc = std::vector<std::array<std::vector<Level>, 2>>;
  Acc acc(1);
  acc[0][0].push_back({0.0, 1});
  for (int dir = 0; dir < n; ++dir) {
    const FactorTable f = factor_table(model.spec.degrees[static_cast<size_t>(dir)], p, k, resolution);
    Acc next(acc.size() + 1);
    for (size_t q1 = 0; q1 < acc.size(); ++q1) {
      for (int p1 = 0; p1 < 2; ++p1) {
        for (int q2 = 0; q2 < 2; ++q2) {
          for (int p2 = 0; p2 < 2; ++p2) {
            auto& dst = next[q1 + static_cast<size_t>(q2)][p1 ^ p2];
            for (const auto& a : acc[q1][p1]) {
              for (const auto& b : f[q2][p2]) dst.push_back({a.lambda + b.lambda, a.multiplicity * b.multiplicity});
            }
          }
        }
      }
    }
    for (auto& slot : next) {
      for (auto& v : slot) v = merge_levels(std::move(v), 1e-12);
    }
    acc = std::move(next);
  }
  std::vector<SpectralTable> tables;
  for (int q = 0; q <= n; ++q) {
    std::vector<Level> raw = acc[static_cast<size_t>(q)][0];
    for (auto& l : raw) l.multiplicity *= model.bundle.aux_rank;
    tables.push_back(make_table(p, q, resolution, std::move(raw), gap_rel));
  }
  return tables;
}

double heat_trace(const SpectralTable& table, double u) {
  if (!(u > 0.0)) throw DomainError("heat_trace: u must be positive");
  double s = 0.0;
  for (const auto& l : table.levels) s += double(l.multiplicity) * std::exp(-u * l.lambda / table.p);
  return s;
}

std::vector<double> morse_sum_vs_trace(const std::vector<SpectralTable>& tables, double u,
                                       const std::vector<long long>& h) {
  if (tables.empty()) throw DomainError("morse_sum_vs_trace: no tables");
  if (h.size() != tables.size()) throw DomainError("morse_sum_vs_trace: need h^j for every degree");
  for (size_t q = 0; q < tables.size(); ++q) {
    if (tables[q].p != tables[0].p) throw DomainError("morse_sum_vs_trace: inconsistent p across tables");
    if (tables[q].q != static_cast<int>(q)) throw DomainError("morse_sum_vs_trace: tables out of order");
  }
  std::vector<double> r;
  double acc = 0.0;
  for (size_t q = 0; q < tables.size(); ++q) {
    // (tr_q - h^q) - previous alternating sum
    acc = (heat_trace(tables[q], u) - double(h[q])) - acc;
    r.push_back(acc);
  }
  return r;
}

int DiscreteComplex::dim(int q) const {
  if (q < 0 || q > n) return 0;
  if (q < n) return static_cast<int>(d[static_cast<size_t>(q)].cols());
  return static_cast<int>(d[static_cast<size_t>(n - 1)].rows());
}

RMatrix DiscreteComplex::laplacian(int q) const {
  const int m = dim(q);
  RMatrix l = RMatrix::Zero(m, m);
  if (q > 0) {
    const RMatrix& a = d[static_cast<size_t>(q - 1)];
    l += a * a.transpose();
  }
  if (q < n) {
    const RMatrix& b = d[static_cast<size_t>(q)];
    l += b.transpose() * b;
  }
  return l;
}

DiscreteComplex DiscreteComplex::invariant_subcomplex() const {
  if (action.empty()) return *this;
  std::vector<RMatrix> basis;
  for (int q = 0; q <= n; ++q) {
    const RMatrix& t = action[static_cast<size_t>(q)];
    const RMatrix proj = 0.5 * (RMatrix::Identity(t.rows(), t.cols()) + t);
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(0.5 * (proj + proj.transpose()));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      if (solver.eigenvalues()(i) > 0.5) keep.push_back(i);
    }
    RMatrix b(t.rows(), static_cast<Eigen::Index>(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
    basis.push_back(std::move(b));
  }
  DiscreteComplex out;
  out.n = n;
  out.p = p;
  for (int q = 0; q < n; ++q) {
    out.d.push_back(basis[static_cast<size_t>(q + 1)].transpose() * d[static_cast<size_t>(q)] *
                    basis[static_cast<size_t>(q)]);
  }
  return out;
}

namespace {

// Full complex of one torus direction with its z -> -z action.
DiscreteComplex direction_complex(int degree, int p, int resolution) {
  DiscreteComplex c;
  c.n = 1;
  c.p = p;
  if (degree == 0) {
    const int kmax = resolution / 2;
    std::vector<std::pair<int, int>> modes;
    for (int a = -kmax; a <= kmax; ++a)
      for (int b = -kmax; b <= kmax; ++b) modes.emplace_back(a, b);
    const auto m = static_cast<Eigen::Index>(modes.size());
    RMatrix d = RMatrix::Zero(m, m), t0 = RMatrix::Zero(m, m), t1 = RMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto [a, b] = modes[static_cast<size_t>(i)];
      // the phase of dbar is odd under m -> -m; keep that sign in a real basis
      const double sign = (a > 0 || (a == 0 && b > 0)) ? 1.0 : -1.0;
      d(i, i) = sign * std::sqrt(2.0) * kPi * std::sqrt(double(a) * a + double(b) * b);
      const Eigen::Index j = m - 1 - i;  // index of (-a, -b)
      t0(j, i) = 1.0;
      t1(j, i) = -1.0;
    }
    c.d.push_back(d);
    c.action = {t0, t1};
    return c;
  }
  const long long sectors = static_cast<long long>(std::abs(degree)) * p;
  const SectorGrid grid = sector_grid(2.0 * kPi * degree * p, resolution);
  const RMatrix ds = sector_differential(grid);
  const Eigen::Index r0 = ds.cols(), r1 = ds.rows();
  const auto ns = static_cast<Eigen::Index>(sectors);
  RMatrix d = RMatrix::Zero(ns * r1, ns * r0);
  RMatrix t0 = RMatrix::Zero(ns * r0, ns * r0), t1 = RMatrix::Zero(ns * r1, ns * r1);
  const RMatrix rev0 = reversal(static_cast<int>(r0)), rev1 = reversal(static_cast<int>(r1));
  for (Eigen::Index j = 0; j < ns; ++j) {
    d.block(j * r1, j * r0, r1, r0) = ds;
    const Eigen::Index jm = (ns - j) % ns;
    t0.block(jm * r0, j * r0, r0, r0) = rev0;
    t1.block(jm * r1, j * r1, r1, r1) = -rev1;
  }
  c.d.push_back(d);
  c.action = {t0, t1};
  return c;
}

}  // namespace

DiscreteComplex assemble_kodaira_laplacian(const CatalogModel& model, int p, int resolution,
                                           bool project) {
  if (model.orbifold.kind != ModelKind::TorusQuotient)
    throw UnsupportedModelError("spectral assembly is implemented for flat torus quotients only");
  const int k = model.spec.k;
  if (k != 1 && k != 2)
    throw UnsupportedModelError("spectral assembly supports torus quotients with k = 1 or 2");
  if (!is_power_of_two(resolution) || resolution < 4)
    throw DomainError("spectral resolution must be a power of two");
  const int n = model.orbifold.dimension;
  if (n > 2) throw UnsupportedModelError("dense assembly is limited to n <= 2; use spectral_tables");
  std::vector<DiscreteComplex> dirs;
  for (int j = 0; j < n; ++j)
    dirs.push_back(direction_complex(model.spec.degrees[static_cast<size_t>(j)], p, resolution));
  DiscreteComplex full;
  if (n == 1) {
    full = dirs[0];
  } else {
    const DiscreteComplex& a = dirs[0];
    const DiscreteComplex& b = dirs[1];
    const Eigen::Index a0 = a.dim(0), a1 = a.dim(1), b0 = b.dim(0), b1 = b.dim(1);
    if (a0 * b0 > kMaxDenseDim || a1 * b0 + a0 * b1 > kMaxDenseDim)
      throw DomainError("dense assembly exceeds the dimension guard");
    const RMatrix ia0 = RMatrix::Identity(a0, a0), ia1 = RMatrix::Identity(a1, a1);
    const RMatrix ib0 = RMatrix::Identity(b0, b0), ib1 = RMatrix::Identity(b1, b1);
    full.n = 2;
    full.p = p;
    RMatrix d0(a1 * b0 + a0 * b1, a0 * b0);
    d0 << Eigen::kroneckerProduct(a.d[0], ib0).eval(), Eigen::kroneckerProduct(ia0, b.d[0]).eval();
    RMatrix d1(a1 * b1, a1 * b0 + a0 * b1);
    d1 << Eigen::kroneckerProduct(ia1, b.d[0]).eval(), (-Eigen::kroneckerProduct(a.d[0], ib1)).eval();
    full.d = {d0, d1};
    RMatrix t1 = RMatrix::Zero(a1 * b0 + a0 * b1, a1 * b0 + a0 * b1);
    t1.topLeftCorner(a1 * b0, a1 * b0) = Eigen::kroneckerProduct(a.action[1], b.action[0]);
    t1.bottomRightCorner(a0 * b1, a0 * b1) = Eigen::kroneckerProduct(a.action[0], b.action[1]);
    full.action = {Eigen::kroneckerProduct(a.action[0], b.action[0]).eval(), t1,
                   Eigen::kroneckerProduct(a.action[1], b.action[1]).eval()};
  }
  for (int q = 0; q <= n; ++q) {
    if (full.dim(q) > kMaxDenseDim) throw DomainError("dense assembly exceeds the dimension guard");
  }
  if (k == 1 || !project) {
    if (k == 1) full.action.clear();
    return full;
  }
  return full.invariant_subcomplex();
}

EigencomplexReport eigencomplex_check(const DiscreteComplex& complex, double lambda,
                                      double cluster_rel) {
  EigencomplexReport rep;
  rep.lambda = lambda;
  if (!(lambda > 1e-8)) {
    rep.skipped = true;
    rep.message = "lambda = 0 is the kernel; exactness does not apply";
    return rep;
  }
  const int n = complex.n;
  std::vector<RMatrix> spaces;
  for (int q = 0; q <= n; ++q) {
    const RMatrix l = complex.laplacian(q);
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(l);
    const RVector& ev = solver.eigenvalues();
    const double scale = std::max(lambda, ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0);
    const double tol = cluster_rel * scale;
    std::vector<Eigen::Index> in;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double dist = std::abs(ev(i) - lambda);
      if (dist <= tol) in.push_back(i);
      else gap = std::min(gap, dist);
    }
    if (gap < 1e-6 * lambda) {
      rep.skipped = true;
      rep.message = "eigencluster too tight to separate in degree " + std::to_string(q);
      return rep;
    }
    RMatrix v(l.rows(), static_cast<Eigen::Index>(in.size()));
    for (size_t c = 0; c < in.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(in[c]);
    rep.dims.push_back(static_cast<int>(in.size()));
    spaces.push_back(std::move(v));
  }
  int total = 0;
  for (int dq : rep.dims) total += dq;
  if (total == 0) {
    rep.skipped = true;
    rep.message = "lambda is not an eigenvalue of the discretized Laplacian";
    return rep;
  }
  int alt = 0;
  for (int q = 0; q <= n; ++q) {
    alt = rep.dims[static_cast<size_t>(q)] - alt;
    rep.alternating.push_back(alt);
    int rank = 0;
    if (q < n && spaces[static_cast<size_t>(q)].cols() > 0) {
      const RMatrix img = complex.d[static_cast<size_t>(q)] * spaces[static_cast<size_t>(q)];
      rank = numerical_rank(img, 1e-8);
    }
    rep.ranks.push_back(rank);
    rep.max_residual = std::max(rep.max_residual, double(std::abs(alt - rank)));
  }
  return rep;
}

void write_spectral_csv(std::ostream& os, const std::vector<SpectralTable>& tables) {
  os << "p,q,lambda,multiplicity\n";
  char buf[64];
  for (const auto& t : tables) {
    for (const auto& l : t.levels) {
      std::snprintf(buf, sizeof buf, "%.9g", l.lambda);
      os << t.p << ',' << t.q << ',' << buf << ',' << l.multiplicity << '\n';
    }
  }
}

}  // namespace orbimorse
