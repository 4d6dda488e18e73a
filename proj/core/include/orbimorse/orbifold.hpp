#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "orbimorse/linalg.hpp"

namespace orbimorse {

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kInvarianceTol = 1e-10;
inline constexpr double kIntegrandTol = 1e-8;

struct GroupElement {
  CMatrix matrix;          // linear action on the chart
  double line_phase = 0.0; // theta_g: action on L at the fixed point
  CMatrix aux_action;      // g^E on the auxiliary fiber
};

using ChartField = std::function<CMatrix(const CVector&)>;

struct OrbifoldChart {
  int dimension = 0;
  std::vector<GroupElement> group;
  ChartField metric_field;
  double radius = std::numeric_limits<double>::infinity();

  bool contains(const CVector& z) const { return z.norm() < radius; }
};

// One node of a group-corrected quadrature: `weight` already carries the
// partition of unity, the 1/|G_U| factor and the Lebesgue weight of the
// chart coordinates. The Riemannian density det G(z) is applied by the caller.
struct QuadratureNode {
  int chart = 0;
  CVector z;
  double weight = 0.0;
};

enum class ModelKind { WeightedProjective, TorusQuotient, LocalModel };

std::string to_string(ModelKind kind);

struct ChartedOrbifold {
  std::string catalog_id;
  ModelKind kind = ModelKind::LocalModel;
  int dimension = 0;
  std::vector<OrbifoldChart> charts;
  std::function<double(int chart, const CVector&)> singular_locus_fn;
  std::function<std::vector<QuadratureNode>(int resolution)> quadrature;

  int max_isotropy() const;
};

struct EquivariantLineBundle {
  std::vector<ChartField> curvature_field;  // one per chart
  int aux_rank = 1;
};

// Validation of the type invariants. All throw ConfigurationError or
// GeometryError with a description of the first violation found.
void validate_group_element(const GroupElement& g, int n, int aux_rank);
void validate_group(const std::vector<GroupElement>& group, int n, int aux_rank);
void validate_chart(const OrbifoldChart& chart, int aux_rank, std::uint64_t seed = 7);
void validate_bundle(const ChartedOrbifold& orb, const EquivariantLineBundle& bundle,
                     std::uint64_t seed = 11);

// Index of the product g*h inside the group, or -1.
int find_element(const std::vector<GroupElement>& group, const CMatrix& m);

// kappa(Z) = det G(Z) / det G(0).
double volume_density(const OrbifoldChart& chart, const CVector& z);

using ChartFunction = std::function<double(int chart, const CVector& z)>;

// Integral of a chart-level invariant function against dv_M.
// Invariance of f is sampled on a deterministic subset of nodes.
double orbifold_integrate(const ChartFunction& f, const ChartedOrbifold& orb, int resolution);

// Same, reusing precomputed nodes (avoids rebuilding them per integrand).
double orbifold_integrate(const ChartFunction& f, const ChartedOrbifold& orb,
                          const std::vector<QuadratureNode>& nodes);

void check_invariance(const ChartFunction& f, const ChartedOrbifold& orb,
                      const std::vector<QuadratureNode>& nodes, double tol = kIntegrandTol);

}  // namespace orbimorse
