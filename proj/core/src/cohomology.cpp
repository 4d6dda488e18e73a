#include "orbimorse/cohomology.hpp"

#include <numeric>
#include <ostream>

#include "orbimorse/errors.hpp"
#include "orbimorse/parallel.hpp"
#include "orbimorse/spectral.hpp"

namespace orbimorse {

namespace {

long long count_rec(const std::vector<int>& a, size_t i, long long d) {
  if (i + 1 == a.size()) return d % a[i] == 0 ? 1 : 0;
  long long c = 0;
  for (long long r = d; r >= 0; r -= a[i]) c += count_rec(a, i + 1, r);
  return c;
}

long long mod_inverse(long long x, long long m) {
  if (m == 1) return 0;
  long long t = 0, nt = 1, r = m, nr = ((x % m) + m) % m;
  while (nr != 0) {
    const long long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw ConfigurationError("weights are not coprime");
  return (t % m + m) % m;
}

void check_weights(const std::vector<int>& w) {
  if (w.size() < 2) throw ConfigurationError("need at least two weights");
  int g = 0;
  for (int x : w) {
    if (x < 1) throw ConfigurationError("weights must be positive");
    g = std::gcd(g, x);
  }
  if (g != 1) throw ConfigurationError("weights are not coprime");
}

}  // namespace

long long weighted_proj_h0_bruteforce(const std::vector<int>& weights, long long d) {
  check_weights(weights);
  if (d < 0) return 0;
  return count_rec(weights, 0, d);
}

long long weighted_proj_h0_dp(const std::vector<int>& weights, long long d) {
  check_weights(weights);
  if (d < 0) return 0;
  std::vector<long long> ways(static_cast<size_t>(d) + 1, 0);
  ways[0] = 1;
  for (int a : weights) {
    for (long long s = a; s <= d; ++s) ways[static_cast<size_t>(s)] += ways[static_cast<size_t>(s - a)];
  }
  return ways[static_cast<size_t>(d)];
}

long long weighted_proj_h0_two(int a, int b, long long d) {
  check_weights({a, b});
  if (d < 0) return 0;
  const long long bi = mod_inverse(b, a);
  const long long ai = mod_inverse(a, b);
  const long long ra = (bi * (d % a)) % a;
  const long long rb = (ai * (d % b)) % b;
  return (d - static_cast<long long>(b) * ra - static_cast<long long>(a) * rb) /
             (static_cast<long long>(a) * b) + 1;
}

long long weighted_proj_h0(const std::vector<int>& weights, long long d) {
  check_weights(weights);
  if (d < 0) return 0;
  if (weights.size() == 2) return weighted_proj_h0_two(weights[0], weights[1], d);
  return weighted_proj_h0_dp(weights, d);
}

long long CohomologyTable::at(int p, int q) const {
  const auto it = entries.find({p, q});
  if (it == entries.end())
    throw DomainError("cohomology table has no entry for p=" + std::to_string(p) +
                      " q=" + std::to_string(q));
  return it->second;
}

std::vector<long long> CohomologyTable::column(int p) const {
  std::vector<long long> h;
  for (int q = 0; q <= n; ++q) h.push_back(at(p, q));
  return h;
}

CohomologyTable cohomology_table(const CatalogModel& model, const std::vector<int>& p_values,
                                 int spectral_resolution) {
  CohomologyTable t;
  t.catalog_id = model.orbifold.catalog_id;
  t.n = model.orbifold.dimension;
  t.p_values = p_values;
  const int n = t.n;
  const long long rank = model.bundle.aux_rank;
  std::vector<std::vector<long long>> cols(p_values.size());
  if (model.orbifold.kind == ModelKind::WeightedProjective) {
    const auto& w = model.spec.weights;
    const long long sum = std::accumulate(w.begin(), w.end(), 0LL);
    parallel_for(p_values.size(), [&](size_t i) {
      const long long d = static_cast<long long>(p_values[i]) * model.spec.degree;
      std::vector<long long> h(static_cast<size_t>(n) + 1, 0);
      h[0] = rank * weighted_proj_h0(w, d);
      // Serre duality with K = O(-sum a_i); the middle groups vanish
      h[static_cast<size_t>(n)] += rank * weighted_proj_h0(w, -d - sum);
      cols[i] = h;
    });
  } else if (model.orbifold.kind == ModelKind::TorusQuotient) {
    parallel_for(p_values.size(), [&](size_t i) {
      const auto tables = spectral_tables(model, p_values[i], spectral_resolution);
      std::vector<long long> h;
      for (const auto& s : tables) h.push_back(s.zero_dim);
      cols[i] = h;
    });
  } else {
    throw UnsupportedModelError("exact cohomology is not available for " + t.catalog_id);
  }
  for (size_t i = 0; i < p_values.size(); ++i) {
    for (int q = 0; q <= n; ++q) t.entries[{p_values[i], q}] = cols[i][static_cast<size_t>(q)];
  }
  return t;
}

void write_cohomology_csv(std::ostream& os, const CohomologyTable& table) {
  os << "p,q,h\n";
  for (int p : table.p_values) {
    for (int q = 0; q <= table.n; ++q) os << p << ',' << q << ',' << table.at(p, q) << '\n';
  }
}

}  // namespace orbimorse
