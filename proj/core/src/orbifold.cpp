#include "orbimorse/orbifold.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "orbimorse/errors.hpp"
#include "orbimorse/parallel.hpp"

namespace orbimorse {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::WeightedProjective: return "wps";
    case ModelKind::TorusQuotient: return "torus";
    case ModelKind::LocalModel: return "local-model";
  }
  return "unknown";
}

int ChartedOrbifold::max_isotropy() const {
  size_t m = 1;
  for (const auto& c : charts) m = std::max(m, c.group.size());
  return static_cast<int>(m);
}

void validate_group_element(const GroupElement& g, int n, int aux_rank) {
  if (g.matrix.rows() != n || g.matrix.cols() != n)
    throw ConfigurationError("group element: matrix has wrong size");
  if (unitarity_defect(g.matrix) > kUnitaryTol)
    throw GeometryError("group element: matrix is not unitary");
  if (g.aux_action.rows() != aux_rank || g.aux_action.cols() != aux_rank)
    throw ConfigurationError("group element: aux action has wrong rank");
  if (unitarity_defect(g.aux_action) > kUnitaryTol)
    throw GeometryError("group element: aux action is not unitary");
  if (!std::isfinite(g.line_phase)) throw ConfigurationError("group element: phase not finite");
}

int find_element(const std::vector<GroupElement>& group, const CMatrix& m) {
  for (size_t i = 0; i < group.size(); ++i) {
    if ((group[i].matrix - m).cwiseAbs().maxCoeff() <= kUnitaryTol) return static_cast<int>(i);
  }
  return -1;
}

void validate_group(const std::vector<GroupElement>& group, int n, int aux_rank) {
  if (group.empty()) throw ConfigurationError("chart group is empty");
  const CMatrix id = CMatrix::Identity(n, n);
  int identities = 0;
  for (const auto& g : group) {
    validate_group_element(g, n, aux_rank);
    if ((g.matrix - id).cwiseAbs().maxCoeff() <= kUnitaryTol) ++identities;
  }
  // effectiveness: the only element acting as the identity is the identity
  if (identities != 1) {
    std::ostringstream os;
    os << "chart group is not effective: " << identities << " elements act as the identity";
    throw ConfigurationError(os.str());
  }
  for (const auto& g : group) {
    if (find_element(group, g.matrix.adjoint()) < 0)
      throw ConfigurationError("chart group not closed under inverses");
    for (const auto& h : group) {
      if (find_element(group, g.matrix * h.matrix) < 0)
        throw ConfigurationError("chart group not closed under composition");
    }
  }
}

namespace {

CVector sample_point(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double r = std::isfinite(radius) ? 0.9 * radius / std::sqrt(2.0 * n) : 1.5;
  CVector z(n);
  for (int j = 0; j < n; ++j) z(j) = Complex(r * unif(rng), r * unif(rng));
  return z;
}

}  // namespace

void validate_chart(const OrbifoldChart& chart, int aux_rank, std::uint64_t seed) {
  const int n = chart.dimension;
  if (n < 1) throw ConfigurationError("chart dimension must be positive");
  if (!(chart.radius > 0.0)) throw ConfigurationError("chart radius must be positive");
  validate_group(chart.group, n, aux_rank);
  const CVector zero = CVector::Zero(n);
  const CMatrix g0 = chart.metric_field(zero);
  if ((g0 - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kInvarianceTol)
    throw GeometryError("metric at the chart center is not the identity");
  std::mt19937_64 rng(seed);
  for (int s = 0; s < 8; ++s) {
    const CVector z = sample_point(rng, n, chart.radius);
    const CMatrix gz = chart.metric_field(z);
    for (const auto& g : chart.group) {
      const CMatrix moved = g.matrix.adjoint() * chart.metric_field(g.matrix * z) * g.matrix;
      const double scale = std::max(1.0, gz.cwiseAbs().maxCoeff());
      if ((moved - gz).cwiseAbs().maxCoeff() > kInvarianceTol * scale)
        throw GeometryError("metric field is not invariant under the chart group");
    }
  }
}

void validate_bundle(const ChartedOrbifold& orb, const EquivariantLineBundle& bundle,
                     std::uint64_t seed) {
  if (bundle.aux_rank < 1) throw ConfigurationError("aux_rank must be >= 1");
  if (bundle.curvature_field.size() != orb.charts.size())
    throw ConfigurationError("curvature field must be given on every chart");
  std::mt19937_64 rng(seed);
  for (size_t c = 0; c < orb.charts.size(); ++c) {
    const auto& chart = orb.charts[c];
    for (int s = 0; s < 6; ++s) {
      const CVector z = sample_point(rng, chart.dimension, chart.radius);
      const CMatrix r = bundle.curvature_field[c](z);
      const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
      if (hermitian_defect(r) > kUnitaryTol * scale)
        throw GeometryError("curvature field is not Hermitian");
      for (const auto& g : chart.group) {
        const CMatrix moved = g.matrix.adjoint() * bundle.curvature_field[c](g.matrix * z) * g.matrix;
        if ((moved - r).cwiseAbs().maxCoeff() > kInvarianceTol * scale)
          throw GeometryError("curvature field is not invariant under the chart group");
      }
    }
  }
}

double volume_density(const OrbifoldChart& chart, const CVector& z) {
  if (z.size() != chart.dimension) throw DomainError("volume_density: dimension mismatch");
  if (!chart.contains(z)) throw DomainError("volume_density: point outside chart");
  const double d0 = chart.metric_field(CVector::Zero(chart.dimension)).determinant().real();
  const double dz = chart.metric_field(z).determinant().real();
  if (!(d0 > 0.0) || !(dz > 0.0)) throw GeometryError("metric not positive definite");
  return dz / d0;
}

void check_invariance(const ChartFunction& f, const ChartedOrbifold& orb,
                      const std::vector<QuadratureNode>& nodes, double tol) {
  if (nodes.empty()) return;
  const size_t stride = std::max<size_t>(1, nodes.size() / 64);
  for (size_t i = 0; i < nodes.size(); i += stride) {
    const auto& node = nodes[i];
    const auto& chart = orb.charts[static_cast<size_t>(node.chart)];
    const double v = f(node.chart, node.z);
    for (const auto& g : chart.group) {
      const double w = f(node.chart, g.matrix * node.z);
      if (std::abs(w - v) > tol * std::max(1.0, std::abs(v))) {
        std::ostringstream os;
        os << "integrand is not group invariant on chart " << node.chart << ": " << v << " vs "
           << w;
        throw IntegrandError(os.str());
      }
    }
  }
}

double orbifold_integrate(const ChartFunction& f, const ChartedOrbifold& orb,
                          const std::vector<QuadratureNode>& nodes) {
  check_invariance(f, orb, nodes);
  std::vector<double> terms(nodes.size(), 0.0);
  parallel_for(nodes.size(), [&](size_t i) {
    const auto& node = nodes[i];
    const double v = f(node.chart, node.z);
    if (v == 0.0) return;
    const auto& chart = orb.charts[static_cast<size_t>(node.chart)];
    terms[i] = node.weight * chart.metric_field(node.z).determinant().real() * v;
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double orbifold_integrate(const ChartFunction& f, const ChartedOrbifold& orb, int resolution) {
  if (resolution < 1) throw DomainError("orbifold_integrate: resolution must be positive");
  if (!orb.quadrature) throw UnsupportedModelError("model has no quadrature rule");
  return orbifold_integrate(f, orb, orb.quadrature(resolution));
}

}  // namespace orbimorse
