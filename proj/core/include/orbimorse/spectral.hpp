#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbimorse/catalog.hpp"

namespace orbimorse {

inline constexpr double kDefaultGapRel = 1e-6;

struct Level {
  double lambda = 0.0;
  long long multiplicity = 0;
};

struct SpectralTable {
  int p = 0;
  int q = 0;
  int resolution = 0;
  std::vector<Level> levels;  // ascending, kernel snapped to lambda = 0
  long long zero_dim = 0;
  double gap_threshold = 0.0;

  long long total_multiplicity() const;
};

// Collapses eigenvalues into levels (relative clustering tolerance rel_tol),
// snaps the kernel with the spectral-gap threshold max(1e-8, gap_rel * median
// positive eigenvalue) and fills zero_dim.
SpectralTable make_table(int p, int q, int resolution, std::vector<Level> raw,
                         double gap_rel = kDefaultGapRel);

// One magnetic Fourier sector of a torus direction: the 1-D staggered sinc
// complex d : C^M -> C^{M-1} (omega > 0) or C^{M+1} (omega < 0) for
// d = (d/dy + omega y)/sqrt(2) on nodes spanning [-8/sqrt|omega|, 8/sqrt|omega|].
struct SectorGrid {
  double omega = 0.0;
  int nodes = 0;
  double h = 0.0;
  std::vector<double> y;    // primal nodes
  std::vector<double> mid;  // staggered nodes
};

SectorGrid sector_grid(double omega, int m);
RMatrix sector_differential(const SectorGrid& grid);

// Sector eigenvalues split by total parity under z -> -z (index 0 even, 1 odd).
// Degree-1 parity includes the sign of the form dz-bar.
struct SectorSpectrum {
  std::array<std::vector<double>, 2> all;                  // [q]
  std::array<std::array<std::vector<double>, 2>, 2> parity;  // [q][even/odd]
};

SectorSpectrum sector_spectrum(double omega, int m);

// Levels of one torus direction of degree d at tensor power p, split by total
// parity: [q][parity]. For k = 1 everything is reported as parity even.
using FactorTable = std::array<std::array<std::vector<Level>, 2>, 2>;
FactorTable factor_table(int degree, int p, int k, int resolution);

// Spectral tables of the Kodaira Laplacian on (0,q)-forms, q = 0..n, for flat
// torus quotients with k in {1, 2}. Throws UnsupportedModelError otherwise.
std::vector<SpectralTable> spectral_tables(const CatalogModel& model, int p, int resolution,
                                           double gap_rel = kDefaultGapRel);

double heat_trace(const SpectralTable& table, double u);

// r_q = sum_{j<=q} (-1)^{q-j} (tr_j - h^j). Throws on inconsistent p.
std::vector<double> morse_sum_vs_trace(const std::vector<SpectralTable>& tables, double u,
                                       const std::vector<long long>& h);

// Explicit finite-dimensional Dolbeault complex: d[q] maps degree q to q+1.
// `action[q]` is the orthogonal action of the generator of the group on
// degree q (empty when the group is trivial).
struct DiscreteComplex {
  int n = 0;
  int p = 0;
  std::vector<RMatrix> d;
  std::vector<RMatrix> action;

  int dim(int q) const;
  RMatrix laplacian(int q) const;
  // Restriction to the subspace fixed by `action`.
  DiscreteComplex invariant_subcomplex() const;
};

// Dense assembly of the full complex (all sectors, all degrees), restricted to
// the invariant subspace for k = 2. Dimension guard: 20000 per degree.
DiscreteComplex assemble_kodaira_laplacian(const CatalogModel& model, int p, int resolution,
                                           bool project = true);

std::vector<double> eigenvalues(const RMatrix& symmetric);

struct EigencomplexReport {
  double lambda = 0.0;
  bool skipped = false;
  std::string message;
  std::vector<int> dims;       // dim F^lambda_q
  std::vector<int> ranks;      // rank of d restricted to F^lambda_q
  std::vector<int> alternating;  // sum_{j<=q} (-1)^{q-j} dim F_j
  double max_residual = 0.0;   // max |alternating_q - rank_q|, plus |alternating_n|
};

EigencomplexReport eigencomplex_check(const DiscreteComplex& complex, double lambda,
                                      double cluster_rel = 1e-8);

// CSV with columns p,q,lambda,multiplicity.
void write_spectral_csv(std::ostream& os, const std::vector<SpectralTable>& tables);

}  // namespace orbimorse
