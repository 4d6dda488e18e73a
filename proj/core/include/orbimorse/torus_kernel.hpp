#pragma once

#include <limits>
#include <vector>

#include "orbimorse/catalog.hpp"

namespace orbimorse {

// A complex number stored as log|z| and arg z, so that sums of terms far
// below the double range keep their magnitude.
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  double phase = 0.0;
};

// log |sum_i z_i| (-inf for an empty or exactly cancelling sum).
double log_abs_sum(const std::vector<LogComplex>& terms);

// Rescaled degree-0 heat kernel p^{-1} e^{-(u/p) box_p}(x', x) on the
// one-dimensional torus cover (k = 1), Landau gauge, by the method of images:
//   K_T(x', x) = sum_{(m, l)} K_L(x', x + (m, l)) e^{-i omega l Re x}.
// The (m, l) = (0, 0) term is returned separately in `identity`.
struct TorusImageSum {
  Complex total = 0.0;
  Complex identity = 0.0;
  LogComplex identity_log;
  std::vector<LogComplex> others;
};

TorusImageSum torus_kernel_images(const CatalogModel& model, int p, double u, Complex xp,
                                  Complex x);

// The same kernel from the sector eigenfunctions of the discretized Laplacian.
Complex torus_kernel_spectral(const CatalogModel& model, int p, double u, Complex xp, Complex x,
                              int resolution);

// Quotient diagonal sum_g tr(g^E) K_T(g^{-1} x, x) for k in {1, 2}, n = 1.
double torus_quotient_diagonal_images(const CatalogModel& model, int p, double u, Complex x);
double torus_quotient_diagonal_spectral(const CatalogModel& model, int p, double u, Complex x,
                                        int resolution);

}  // namespace orbimorse
