#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbimorse/catalog.hpp"
#include "orbimorse/cohomology.hpp"
#include "orbimorse/curvature.hpp"

namespace orbimorse {

enum class Verdict { MoishezonByPositivity, MoishezonBySignature, Inconclusive };
std::string to_string(Verdict v);

struct CriterionVerdict {
  double integral = 0.0;          // int_{M(<=1)} (i/2pi R^L)^n
  double min_eigenvalue = 0.0;    // over every sampled point
  double max_min_eigenvalue = 0.0;  // best pointwise lower eigenvalue
  bool semipositive = false;
  bool positive_somewhere = false;
  bool implication_holds = true;  // semipositive => integral >= -tol
  double degenerate_fraction = 0.0;
  std::size_t samples = 0;
  Verdict verdict = Verdict::Inconclusive;
};

// Samples every quadrature node plus `random_samples` seeded jittered points.
CriterionVerdict moishezon_check(const CatalogModel& model, int resolution, double tol_degeneracy,
                                 double tol_quadrature, std::uint64_t seed = 1,
                                 int random_samples = 256);

struct BignessResult {
  double estimate = 0.0;  // max of p^{-n} h^0 over the top decade
  double noise = 0.0;     // 1 / smallest p of the tail
  int tail_points = 0;
  bool big = false;
};

// Needs at least 10 table columns with p >= p_max / 10.
BignessResult bigness_check(const CohomologyTable& table, int n);

// m * binom(n + k, k), exact. Throws DomainError on negative input or overflow.
std::uint64_t siegel_bound(std::uint64_t m, std::uint64_t n, std::uint64_t k);

struct KodairaRank {
  int rank = 0;
  long long sections = 0;  // sections used (capped for large spaces)
  bool defined = true;     // false when h^0 = 0 or every sample is a base point
  std::string note;
};

// Max over seeded regular samples of the rank of the Jacobian of
// x -> [s_1(x) / s_ref(x), ...]. Weighted projective spaces use the monomial
// basis in chart 0, torus quotients (k in {1, 2}) use theta-type sections.
KodairaRank kodaira_rank(const CatalogModel& model, int p, std::uint64_t seed = 1,
                         int samples = 8);

}  // namespace orbimorse
