#pragma once

#include <nlohmann/json.hpp>

#include "orbimorse/catalog.hpp"

namespace testing_helpers {

inline orbimorse::CatalogModel make(const nlohmann::json& j) {
  return orbimorse::build_catalog_orbifold(orbimorse::catalog_spec_from_json(j));
}

inline orbimorse::CatalogModel make_wps(std::vector<int> w, int d, double eps = 0.0) {
  return make({{"id", "wps"}, {"weights", w}, {"degree", d}, {"perturbation", eps}});
}

inline orbimorse::CatalogModel make_torus(int n, int k, std::vector<int> d) {
  return make({{"id", "torus"}, {"n", n}, {"k", k}, {"degrees", d}});
}

inline orbimorse::CatalogModel make_local(int k, std::vector<double> a, std::vector<int> w,
                                     double radius = 1000.0) {
  return make({{"id", "local-model"}, {"n", static_cast<int>(a.size())}, {"k", k}, {"a", a},
               {"action_weights", w}, {"radius", radius}});
}

inline orbimorse::CVector pt(std::initializer_list<std::complex<double>> z) {
  orbimorse::CVector v(static_cast<Eigen::Index>(z.size()));
  Eigen::Index i = 0;
  for (auto c : z) v(i++) = c;
  return v;
}

}  // namespace testing_helpers
