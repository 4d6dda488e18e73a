#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orbimorse/catalog.hpp"

namespace orbimorse {

// #{m in N^{n+1} : sum a_i m_i = d}; 0 for d < 0.
long long weighted_proj_h0(const std::vector<int>& weights, long long d);

// Reference implementations. The brute force walks every tuple and is only an
// oracle; its cost grows like d^n.
long long weighted_proj_h0_bruteforce(const std::vector<int>& weights, long long d);
long long weighted_proj_h0_dp(const std::vector<int>& weights, long long d);
// Two coprime weights: d/(ab) - {b'd/a} - {a'd/b} + 1 with b b' = 1 mod a, a a' = 1 mod b.
long long weighted_proj_h0_two(int a, int b, long long d);

struct CohomologyTable {
  std::string catalog_id;
  int n = 0;
  std::vector<int> p_values;
  std::map<std::pair<int, int>, long long> entries;  // (p, q) -> h^q

  long long at(int p, int q) const;
  std::vector<long long> column(int p) const;  // h^0..h^n at p
};

// Exact table for weighted projective spaces (h^n by Serre duality, zero in
// between) and spectral kernel counts for flat torus quotients.
CohomologyTable cohomology_table(const CatalogModel& model, const std::vector<int>& p_values,
                                 int spectral_resolution = 64);

// CSV with columns p,q,h.
void write_cohomology_csv(std::ostream& os, const CohomologyTable& table);

}  // namespace orbimorse
