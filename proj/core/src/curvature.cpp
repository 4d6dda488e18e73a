#include "orbimorse/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbimorse/errors.hpp"
#include "orbimorse/parallel.hpp"

namespace orbimorse {

CMatrix curvature_endomorphism(const EquivariantLineBundle& bundle, const ChartedOrbifold& orb,
                               int chart, const CVector& x) {
  if (chart < 0 || chart >= static_cast<int>(orb.charts.size()))
    throw DomainError("curvature_endomorphism: no such chart");
  const auto& c = orb.charts[static_cast<size_t>(chart)];
  if (x.size() != c.dimension) throw DomainError("curvature_endomorphism: dimension mismatch");
  if (!c.contains(x)) throw DomainError("curvature_endomorphism: point outside chart");
  const CMatrix g = c.metric_field(x);
  Eigen::LLT<CMatrix> llt(0.5 * (g + g.adjoint()));
  if (llt.info() != Eigen::Success) throw GeometryError("metric is not positive definite");
  const CMatrix l = llt.matrixL();
  for (Eigen::Index j = 0; j < l.rows(); ++j) {
    if (!(l(j, j).real() > 0.0)) throw GeometryError("metric is not positive definite");
  }
  const CMatrix r = bundle.curvature_field[static_cast<size_t>(chart)](x);
  const CMatrix tmp = l.triangularView<Eigen::Lower>().solve(r);
  const CMatrix out = l.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint();
  return 0.5 * (out + out.adjoint());
}

std::optional<int> classify_point(const std::vector<double>& eigenvalues, double tol) {
  int neg = 0;
  for (double a : eigenvalues) {
    if (std::abs(a) <= tol) return std::nullopt;
    if (a < 0.0) ++neg;
  }
  return neg;
}

std::optional<int> classify_point(const CurvatureSpectrum& spec, double tol) {
  return classify_point(spec.eigenvalues, tol);
}

CurvatureSpectrum curvature_spectrum(const EquivariantLineBundle& bundle,
                                     const ChartedOrbifold& orb, int chart, const CVector& x,
                                     double tol) {
  const CMatrix rdot = curvature_endomorphism(bundle, orb, chart, x);
  const HermitianEigen eig = hermitian_eigen(rdot);
  CurvatureSpectrum s;
  s.chart = chart;
  s.point = x;
  s.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  s.signature = classify_point(s.eigenvalues, tol);
  return s;
}

double MorseIntegralTable::over(const std::vector<int>& q_set) const {
  double v = 0.0;
  for (int q : q_set) {
    if (q < 0 || q >= static_cast<int>(by_q.size())) throw DomainError("q outside 0..n");
    v += by_q[static_cast<size_t>(q)];
  }
  return v;
}

double MorseIntegralTable::up_to(int q) const {
  double v = 0.0;
  for (int j = 0; j <= q && j < static_cast<int>(by_q.size()); ++j) v += by_q[static_cast<size_t>(j)];
  return v;
}

namespace {

struct NodeValue {
  int q = -1;  // -1 degenerate
  double density = 0.0;  // det(R-dot / 2 pi) det G
};

NodeValue evaluate_node(const ChartedOrbifold& orb, const EquivariantLineBundle& bundle,
                        const QuadratureNode& node, double tol) {
  const int n = orb.dimension;
  const CMatrix rdot = curvature_endomorphism(bundle, orb, node.chart, node.z);
  const HermitianEigen eig = hermitian_eigen(rdot);
  std::vector<double> a(eig.values.data(), eig.values.data() + n);
  NodeValue v;
  const auto q = classify_point(a, tol);
  if (!q) return v;
  v.q = *q;
  double det = 1.0;
  for (double x : a) det *= x / (2.0 * std::numbers::pi);
  const auto& chart = orb.charts[static_cast<size_t>(node.chart)];
  v.density = det * chart.metric_field(node.z).determinant().real();
  return v;
}

}  // namespace

MorseIntegralTable morse_integral_table(const ChartedOrbifold& orb,
                                        const EquivariantLineBundle& bundle, int resolution,
                                        double tol) {
  if (!(tol > 0.0)) throw DomainError("degeneracy tolerance must be positive");
  if (!orb.quadrature) throw UnsupportedModelError("model has no quadrature rule");
  const std::vector<QuadratureNode> nodes = orb.quadrature(resolution);
  std::vector<NodeValue> values(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) { values[i] = evaluate_node(orb, bundle, nodes[i], tol); });
  MorseIntegralTable t;
  t.by_q.assign(static_cast<size_t>(orb.dimension) + 1, 0.0);
  t.nodes = nodes.size();
  std::size_t degenerate = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (values[i].q < 0) {
      ++degenerate;
      continue;
    }
    t.by_q[static_cast<size_t>(values[i].q)] += nodes[i].weight * values[i].density;
  }
  t.degenerate_fraction = nodes.empty() ? 0.0 : double(degenerate) / double(nodes.size());
  return t;
}

MorseIntegral morse_integral(const ChartedOrbifold& orb, const EquivariantLineBundle& bundle,
                             const std::vector<int>& q_set, int resolution, double tol) {
  if (q_set.empty()) throw DomainError("morse_integral: q_set must be nonempty");
  for (int q : q_set) {
    if (q < 0 || q > orb.dimension) throw DomainError("morse_integral: q outside 0..n");
  }
  if (!(tol > 0.0)) throw DomainError("degeneracy tolerance must be positive");
  if (!orb.quadrature) throw UnsupportedModelError("model has no quadrature rule");
  const std::vector<QuadratureNode> nodes = orb.quadrature(resolution);
  const int n = orb.dimension;
  // det(R-dot/2pi) restricted to the requested signatures, as a chart function
  ChartFunction f = [&](int chart, const CVector& z) {
    const CMatrix rdot = curvature_endomorphism(bundle, orb, chart, z);
    const HermitianEigen eig = hermitian_eigen(rdot);
    std::vector<double> a(eig.values.data(), eig.values.data() + n);
    const auto q = classify_point(a, tol);
    if (!q || std::find(q_set.begin(), q_set.end(), *q) == q_set.end()) return 0.0;
    double det = 1.0;
    for (double x : a) det *= x / (2.0 * std::numbers::pi);
    return det;
  };
  check_invariance(f, orb, nodes);
  std::vector<NodeValue> values(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) { values[i] = evaluate_node(orb, bundle, nodes[i], tol); });
  MorseIntegral out;
  out.nodes = nodes.size();
  std::size_t degenerate = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (values[i].q < 0) {
      ++degenerate;
      continue;
    }
    if (std::find(q_set.begin(), q_set.end(), values[i].q) != q_set.end())
      out.value += nodes[i].weight * values[i].density;
  }
  out.degenerate_fraction = nodes.empty() ? 0.0 : double(degenerate) / double(nodes.size());
  return out;
}

}  // namespace orbimorse
