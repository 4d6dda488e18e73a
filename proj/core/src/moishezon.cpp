#include "orbimorse/moishezon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <numbers>
#include <random>

#include "orbimorse/errors.hpp"
#include "orbimorse/parallel.hpp"

namespace orbimorse {

namespace {

constexpr double kRankTol = 1e-8;
constexpr long long kSectionCap = 4000;

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// monomial exponents (m_1..m_n) completing to weighted degree p with m_0 >= 0
std::vector<std::vector<int>> wps_monomials(const std::vector<int>& w, int p, bool& capped) {
  const int n = static_cast<int>(w.size()) - 1;
  std::vector<std::vector<int>> out;
  std::vector<int> m(static_cast<size_t>(n), 0);
  capped = false;
  auto rec = [&](auto&& self, int j, int used) -> void {
    if (static_cast<long long>(out.size()) >= kSectionCap) {
      capped = true;
      return;
    }
    if (j == n) {
      if ((p - used) % w[0] == 0) out.push_back(m);
      return;
    }
    for (int e = 0; used + e * w[static_cast<size_t>(j) + 1] <= p; ++e) {
      m[static_cast<size_t>(j)] = e;
      self(self, j + 1, used + e * w[static_cast<size_t>(j) + 1]);
    }
    m[static_cast<size_t>(j)] = 0;
  };
  if (p >= 0) rec(rec, 0, 0);
  return out;
}

KodairaRank wps_rank(const CatalogModel& model, int p, std::uint64_t seed, int samples) {
  const auto& w = model.spec.weights;
  const int n = static_cast<int>(w.size()) - 1;
  const int deg = model.spec.degree * p;
  KodairaRank out;
  bool capped = false;
  const auto mons = wps_monomials(w, deg, capped);
  out.sections = static_cast<long long>(mons.size());
  if (capped) out.note = "section basis capped at " + std::to_string(kSectionCap);
  if (mons.empty()) {
    out.defined = false;
    out.note = "no sections";
    return out;
  }
  if (mons.size() == 1) return out;
  for (int s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> logz(static_cast<size_t>(n));
    for (auto& lz : logz) {
      const double r = rad(rng);
      lz = Complex(std::log(r), ang(rng));
    }
    // reference section: largest modulus at this point
    size_t ref = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mons.size(); ++i) {
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += mons[i][static_cast<size_t>(j)] * logz[static_cast<size_t>(j)].real();
      if (v > best) {
        best = v;
        ref = i;
      }
    }
    CMatrix jac(static_cast<Eigen::Index>(mons.size()), n);
    for (size_t i = 0; i < mons.size(); ++i) {
      Complex l = 0.0;
      for (int j = 0; j < n; ++j)
        l += double(mons[i][static_cast<size_t>(j)] - mons[ref][static_cast<size_t>(j)]) * logz[static_cast<size_t>(j)];
      const Complex ratio = std::exp(l);
      for (int j = 0; j < n; ++j) {
        const double e = mons[i][static_cast<size_t>(j)] - mons[ref][static_cast<size_t>(j)];
        jac(static_cast<Eigen::Index>(i), j) = e * ratio / std::exp(logz[static_cast<size_t>(j)]);
      }
    }
    out.rank = std::max(out.rank, numerical_rank(jac, kRankTol));
  }
  return out;
}

// theta-type section of one torus direction, N = degree * p > 0
Complex theta(int j, int big_n, double x, double y) {
  Complex s = 0.0;
  const double c = y + double(j) / big_n;
  const double reach = std::sqrt(40.0 / (std::numbers::pi * big_n));
  const int lo = static_cast<int>(std::floor(-c - reach)) - 1;
  const int hi = static_cast<int>(std::ceil(-c + reach)) + 1;
  for (int l = lo; l <= hi; ++l) {
    const double t = c + l;
    s += std::polar(std::exp(-std::numbers::pi * big_n * t * t),
                    2.0 * std::numbers::pi * (j + double(l) * big_n) * x);
  }
  return s;
}

KodairaRank torus_rank(const CatalogModel& model, int p, std::uint64_t seed, int samples) {
  const int n = model.orbifold.dimension;
  const int k = model.spec.k;
  if (k != 1 && k != 2) throw UnsupportedModelError("kodaira_rank: torus supports k = 1 or 2");
  std::vector<int> big_n(static_cast<size_t>(n));
  KodairaRank out;
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    const int d = model.spec.degrees[static_cast<size_t>(i)];
    if (d < 0) {
      out.defined = false;
      out.note = "no sections";
      return out;
    }
    big_n[static_cast<size_t>(i)] = d * p;
    total *= std::max(1, d * p);
  }
  if (total > kSectionCap) throw DomainError("kodaira_rank: section space too large");
  // index tuples; for k = 2 keep one representative of each pair J, -J
  std::vector<std::vector<int>> basis;
  std::vector<int> j(static_cast<size_t>(n), 0);
  while (true) {
    bool keep = true;
    if (k == 2) {
      std::vector<int> neg(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        const int m = std::max(1, big_n[static_cast<size_t>(i)]);
        neg[static_cast<size_t>(i)] = (m - j[static_cast<size_t>(i)]) % m;
      }
      keep = j <= neg;
    }
    if (keep) basis.push_back(j);
    int d = 0;
    while (d < n && ++j[static_cast<size_t>(d)] >= std::max(1, big_n[static_cast<size_t>(d)]))
      j[static_cast<size_t>(d++)] = 0;
    if (d == n) break;
  }
  out.sections = static_cast<long long>(basis.size());
  if (basis.size() == 1) return out;

  auto section = [&](const std::vector<int>& idx, const RVector& r, double sign) {
    Complex s = 1.0;
    for (int i = 0; i < n; ++i) {
      const int m = big_n[static_cast<size_t>(i)];
      if (m == 0) continue;
      s *= theta(idx[static_cast<size_t>(i)], m, sign * r(2 * i), sign * r(2 * i + 1));
    }
    return s;
  };
  auto all_sections = [&](const RVector& r) {
    std::vector<Complex> v(basis.size());
    for (size_t b = 0; b < basis.size(); ++b) {
      v[b] = section(basis[b], r, 1.0);
      // z -> -z maps theta_J to theta_{-J}
      if (k == 2) v[b] += section(basis[b], r, -1.0);
    }
    return v;
  };
  int used = 0;
  for (int s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RVector r(2 * n);
    CVector z(n);
    do {
      for (int i = 0; i < 2 * n; ++i) r(i) = unit(rng);
      for (int i = 0; i < n; ++i) z(i) = Complex(r(2 * i), r(2 * i + 1));
    } while (model.orbifold.singular_locus_fn(0, z) < 0.05);
    const auto v0 = all_sections(r);
    size_t ref = 0;
    for (size_t b = 1; b < v0.size(); ++b)
      if (std::abs(v0[b]) > std::abs(v0[ref])) ref = b;
    if (std::abs(v0[ref]) < 1e-250) continue;
    ++used;
    // fourth-order central differences of the ratios in real coordinates
    const double h = 1e-3;
    RMatrix jac(2 * static_cast<Eigen::Index>(basis.size()), 2 * n);
    for (int c = 0; c < 2 * n; ++c) {
      std::vector<std::vector<Complex>> f;
      for (double t : {-2.0, -1.0, 1.0, 2.0}) {
        RVector rr = r;
        rr(c) += t * h;
        auto v = all_sections(rr);
        for (auto& e : v) e /= v[ref];
        f.push_back(std::move(v));
      }
      for (size_t b = 0; b < basis.size(); ++b) {
        const Complex dv = (f[0][b] - 8.0 * f[1][b] + 8.0 * f[2][b] - f[3][b]) / (12.0 * h);
        jac(2 * static_cast<Eigen::Index>(b), c) = dv.real();
        jac(2 * static_cast<Eigen::Index>(b) + 1, c) = dv.imag();
      }
    }
    out.rank = std::max(out.rank, numerical_rank(jac, kRankTol) / 2);
  }
  if (used == 0) {
    out.defined = false;
    out.note = "every sample is a base point";
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::MoishezonByPositivity: return "Moishezon-by-(i)";
    case Verdict::MoishezonBySignature: return "Moishezon-by-(ii)";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CriterionVerdict moishezon_check(const CatalogModel& model, int resolution, double tol_degeneracy,
                                 double tol_quadrature, std::uint64_t seed, int random_samples) {
  if (!(tol_degeneracy > 0.0) || !(tol_quadrature > 0.0))
    throw DomainError("moishezon_check: tolerances must be positive");
  const auto& orb = model.orbifold;
  const auto& bundle = model.bundle;
  if (orb.kind == ModelKind::LocalModel)
    throw UnsupportedModelError("moishezon_check: local models are not compact");
  const int n = orb.dimension;
  CriterionVerdict v;
  const MorseIntegralTable table = morse_integral_table(orb, bundle, resolution, tol_degeneracy);
  v.integral = factorial(n) * table.up_to(std::min(1, n));
  v.degenerate_fraction = table.degenerate_fraction;

  const auto nodes = orb.quadrature(resolution);
  if (nodes.empty()) throw GeometryError("moishezon_check: empty quadrature");
  std::vector<std::pair<int, CVector>> points;
  points.reserve(nodes.size() + static_cast<size_t>(random_samples));
  for (const auto& nd : nodes) points.emplace_back(nd.chart, nd.z);
  for (int s = 0; s < random_samples; ++s) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    std::uniform_int_distribution<size_t> pick(0, nodes.size() - 1);
    std::normal_distribution<double> jitter(0.0, 0.05);
    const auto& base = nodes[pick(rng)];
    CVector z = base.z;
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) += Complex(jitter(rng), jitter(rng));
    if (!orb.charts[static_cast<size_t>(base.chart)].contains(z)) z = base.z;
    points.emplace_back(base.chart, z);
  }
  std::vector<double> lowest(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto spec = curvature_spectrum(bundle, orb, points[i].first, points[i].second, tol_degeneracy);
    lowest[i] = spec.eigenvalues.front();
  });
  v.samples = points.size();
  v.min_eigenvalue = *std::min_element(lowest.begin(), lowest.end());
  v.max_min_eigenvalue = *std::max_element(lowest.begin(), lowest.end());
  v.semipositive = v.min_eigenvalue >= -tol_degeneracy;
  v.positive_somewhere = v.max_min_eigenvalue > tol_degeneracy;
  if (v.semipositive) v.implication_holds = v.integral >= -tol_quadrature;
  if (v.semipositive && v.positive_somewhere) v.verdict = Verdict::MoishezonByPositivity;
  else if (v.integral > tol_quadrature) v.verdict = Verdict::MoishezonBySignature;
  return v;
}

BignessResult bigness_check(const CohomologyTable& table, int n) {
  if (table.p_values.empty()) throw DomainError("bigness_check: empty table");
  const int p_max = *std::max_element(table.p_values.begin(), table.p_values.end());
  BignessResult r;
  int p_lo = p_max;
  for (int p : table.p_values) {
    if (10 * p < p_max) continue;
    ++r.tail_points;
    p_lo = std::min(p_lo, p);
    r.estimate = std::max(r.estimate, double(table.at(p, 0)) / std::pow(double(p), n));
  }
  if (r.tail_points < 10)
    throw DomainError("bigness_check: need at least 10 points in the top decade of p, got " +
                      std::to_string(r.tail_points));
  r.noise = 1.0 / p_lo;
  r.big = r.estimate > 10.0 * r.noise;
  return r;
}

std::uint64_t siegel_bound(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  const std::uint64_t lim = std::numeric_limits<std::uint64_t>::max();
  if (n > lim - k) throw DomainError("siegel_bound: arguments out of range");
  // binom(n + k, k) = prod_i (n + k - kk + i) / i, kept exact by cancelling gcds
  const std::uint64_t kk = std::min(n, k);
  std::uint64_t b = 1;
  for (std::uint64_t i = 1; i <= kk; ++i) {
    std::uint64_t x = n + k - kk + i;
    const std::uint64_t g = std::gcd(b, i);
    b /= g;
    x /= i / g;
    if (b > lim / x) throw DomainError("siegel_bound: overflow");
    b *= x;
  }
  if (m != 0 && b > lim / m) throw DomainError("siegel_bound: overflow");
  return b * m;
}

KodairaRank kodaira_rank(const CatalogModel& model, int p, std::uint64_t seed, int samples) {
  if (p < 1) throw DomainError("kodaira_rank: p must be >= 1");
  if (samples < 1) throw DomainError("kodaira_rank: need at least one sample");
  switch (model.orbifold.kind) {
    case ModelKind::WeightedProjective: return wps_rank(model, p, seed, samples);
    case ModelKind::TorusQuotient: return torus_rank(model, p, seed, samples);
    case ModelKind::LocalModel: break;
  }
  throw UnsupportedModelError("kodaira_rank: local models are not compact");
}

}  // namespace orbimorse
