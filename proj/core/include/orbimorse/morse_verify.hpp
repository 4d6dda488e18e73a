#pragma once

#include <string>
#include <vector>

#include "orbimorse/catalog.hpp"
#include "orbimorse/cohomology.hpp"
#include "orbimorse/curvature.hpp"

namespace orbimorse {

inline constexpr double kSubtractionFloor = 1e-12;

// Least-squares slope of log err against log p on the largest contiguous run
// of points with err above the floor. Errors known in closed form are passed
// with log_floor = -inf. Fits with R^2 < 0.9 are marked unreliable; if no two
// points clear the floor the fit is marked below_floor.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool reliable = false;
  bool below_floor = false;
  int first = -1;  // index range used
  int last = -1;
};

RateFit fit_convergence_order(const std::vector<double>& p, const std::vector<double>& log_err,
                              double log_floor);

// Right sides of the inequalities (per unit p^n):
//   strong: rank (-1)^q int_{M(<=q)} det(R-dot/2pi) dv,
//   weak:   rank (-1)^q int_{M(q)}  det(R-dot/2pi) dv.
double strong_rhs(const MorseIntegralTable& integrals, int q, int aux_rank);
double weak_rhs(const MorseIntegralTable& integrals, int q, int aux_rank);
// strong(q) + strong(q-1) - weak(q); zero up to rounding.
double telescoping_defect(const MorseIntegralTable& integrals, int q, int aux_rank);

struct StrongMorsePoint {
  int p = 0;
  double lhs = 0.0;       // p^{-n} sum_{j<=q} (-1)^{q-j} h^j
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
  double tolerance = 0.0;
};

struct StrongMorseSeries {
  int q = 0;
  std::vector<StrongMorsePoint> points;
  double degenerate_fraction = 0.0;
  bool consistent = true;
  std::string note;
};

StrongMorseSeries verify_strong_morse(const CohomologyTable& table,
                                      const MorseIntegralTable& integrals, int q, int aux_rank,
                                      double tol_quadrature);

StrongMorseSeries verify_strong_morse(const CatalogModel& model, int q,
                                      const std::vector<int>& p_list, int resolution,
                                      double tol_degeneracy = kDefaultDegeneracyTol,
                                      int spectral_resolution = 64, double tol_quadrature = 1e-3);

struct KernelRecord {
  int p = 0;
  double u = 0.0;
  double log_error = 0.0;  // natural log of the observed error
  double error = 0.0;      // exp(log_error), may underflow to 0
  double predicted_bound = 0.0;
};

struct RegularAsymptotics {
  double distance = 0.0;  // distance of x to the singular set
  std::vector<KernelRecord> records;
  RateFit fit;
  bool pass = false;  // slope <= -0.4, or every error is exactly zero / below the floor
};

// err(p) = |p^{-n} e^{-u box_p / p}(x, x) - Lim_u(x)| from the image sum over
// the group (local models) or the lattice and group (n = 1 torus quotients).
// Refuses points closer than delta to the singular set.
RegularAsymptotics verify_kernel_asymptotics_regular(const CatalogModel& model, int chart,
                                                     const CVector& x, double u,
                                                     const std::vector<int>& p_list,
                                                     double delta = 0.1, int q = 0);

struct SingularRecord {
  int p = 0;
  CVector z;
  double oracle = 0.0;             // p^{-n} kernel(z, z) by images
  double lim = 0.0;                // Lim_u(z)
  double naive_residual = 0.0;     // |oracle - Lim_u|
  double corrected_residual = 0.0; // after the twisted-Gaussian corrections
  double envelope = 0.0;           // C p^{-1/2}
};

struct SingularAsymptotics {
  std::vector<SingularRecord> records;
  double envelope_constant = 0.0;
  bool within_envelope = true;
  double min_shrink = 0.0;  // min over p of naive / corrected
};

// Local models C^n/Z_k. `scaled` = true means z is given in units of
// p^{-1/2}, i.e. the point used at tensor power p is z / sqrt(p).
SingularAsymptotics verify_kernel_asymptotics_singular(const CatalogModel& model,
                                                       const CVector& z, double u,
                                                       const std::vector<int>& p_list,
                                                       bool scaled, int q = 0);

struct DiagonalFactor {
  double ratio = 0.0;
  int expected = 0;  // |G_x|
  double deviation = 0.0;
};

// p^{-n} kernel(x, x) / Lim_u(x) at the fixed point of a local model.
DiagonalFactor singular_diagonal_factor(const CatalogModel& model, double u, int p, int q = 0);

// p^{-n} e^{-u box_p/p}(z, z) on Lambda^{0,q} (x) E of a local model by the
// method of images, as a complex number (its imaginary part vanishes up to
// rounding for real phases).
Complex local_model_image_sum(const CatalogModel& model, int p, double u, const CVector& z, int q);

}  // namespace orbimorse
