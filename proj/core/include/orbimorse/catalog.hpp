#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orbimorse/orbifold.hpp"

namespace orbimorse {

// Parameters of a built-in model. Only the fields relevant to `id` are read.
//   "wps"         weights, degree, perturbation, aux_rank
//   "torus"       n, k, degrees, aux_rank
//   "local-model" n, k, a, action_weights, radius, theta, aux_rank
struct CatalogSpec {
  std::string id = "wps";
  std::vector<int> weights{1, 1};
  int degree = 1;
  double perturbation = 0.0;
  int n = 1;
  int k = 1;
  std::vector<int> degrees;
  std::vector<double> a;
  std::vector<int> action_weights;
  double radius = 1.0;
  double theta = 0.0;
  int aux_rank = 1;

  int dimension() const;
};

CatalogSpec catalog_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CatalogSpec& spec);
std::string describe(const CatalogSpec& spec);

struct CatalogModel {
  CatalogSpec spec;
  ChartedOrbifold orbifold;
  EquivariantLineBundle bundle;
};

// Builds and validates a catalog pair. Throws ConfigurationError for unknown
// ids or invalid parameters.
CatalogModel build_catalog_orbifold(const CatalogSpec& spec);
CatalogModel build_catalog_orbifold(const std::string& id, const nlohmann::json& params);

// Weighted projective space helpers. Chart i is {z_i = 1}; its coordinates are
// the remaining z_j in increasing j. "raw" coordinates are those z_j, chart
// coordinates are w = z * sqrt(2 / a_i) so that the metric is the identity at
// the chart center.
namespace wps {

std::vector<int> chart_weights(const std::vector<int>& weights, int chart);
double scale(const std::vector<int>& weights, int chart);  // w = scale * z

// t = log(rho) with sum_j |z_j|^2 rho^{-a_j} = 1.
double potential(const std::vector<int>& weights, int chart, const CVector& zraw);

// 2 d dbar t in raw coordinates.
CMatrix hessian_raw(const std::vector<int>& weights, int chart, const CVector& zraw);

// Metric (O(1) curvature form) in chart coordinates.
CMatrix metric(const std::vector<int>& weights, int chart, const CVector& w);

// Partition-of-unity weight psi_i at a raw chart point.
double partition(const std::vector<int>& weights, int chart, const CVector& zraw);

// Geodesic distance to the singular poles (n = 1 only).
double singular_distance(const std::vector<int>& weights, int chart, const CVector& w);

}  // namespace wps

}  // namespace orbimorse
