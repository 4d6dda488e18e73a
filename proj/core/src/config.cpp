#include "orbimorse/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "orbimorse/errors.hpp"

namespace orbimorse {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigurationError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigurationError(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigurationError(where + "." + key + ": wrong type");
  }
}

}  // namespace

std::vector<int> RunConfig::qs(int n) const {
  if (!q_list.empty()) return q_list;
  std::vector<int> q(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) q[static_cast<size_t>(i)] = i;
  return q;
}

RunConfig parse_config(const json& j) {
  reject_unknown(j, "config", {"catalog", "sampling", "quadrature", "spectral", "tolerances",
                               "kernel", "moishezon", "output", "seed"});
  RunConfig c;
  if (!j.contains("catalog")) throw ConfigurationError("config: missing 'catalog'");
  c.catalog = catalog_spec_from_json(j.at("catalog"));
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    reject_unknown(s, "sampling", {"p_list", "u_list", "q_list"});
    read(s, "p_list", c.p_list, "sampling");
    read(s, "u_list", c.u_list, "sampling");
    read(s, "q_list", c.q_list, "sampling");
  }
  if (j.contains("quadrature")) {
    reject_unknown(j.at("quadrature"), "quadrature", {"resolution"});
    read(j.at("quadrature"), "resolution", c.quadrature_resolution, "quadrature");
  }
  if (j.contains("spectral")) {
    reject_unknown(j.at("spectral"), "spectral", {"resolution"});
    read(j.at("spectral"), "resolution", c.spectral_resolution, "spectral");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    reject_unknown(t, "tolerances", {"tol_degeneracy", "tol_spectral_gap", "tol_quadrature"});
    read(t, "tol_degeneracy", c.tol_degeneracy, "tolerances");
    read(t, "tol_spectral_gap", c.tol_spectral_gap, "tolerances");
    read(t, "tol_quadrature", c.tol_quadrature, "tolerances");
  }
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    reject_unknown(k, "kernel", {"points", "scaled_points", "delta", "diagonal_p_list"});
    read(k, "points", c.kernel.points, "kernel");
    read(k, "scaled_points", c.kernel.scaled_points, "kernel");
    read(k, "delta", c.kernel.delta, "kernel");
    read(k, "diagonal_p_list", c.kernel.diagonal_p_list, "kernel");
  }
  if (j.contains("moishezon")) {
    const auto& m = j.at("moishezon");
    reject_unknown(m, "moishezon",
                   {"random_samples", "expect_big", "kodaira_p_max", "siegel_m", "siegel_log_c"});
    read(m, "random_samples", c.moishezon.random_samples, "moishezon");
    if (m.contains("expect_big")) {
      read(m, "expect_big", c.moishezon.expect_big, "moishezon");
      c.moishezon.expect_big_set = true;
    }
    read(m, "kodaira_p_max", c.moishezon.kodaira_p_max, "moishezon");
    read(m, "siegel_m", c.moishezon.siegel_m, "moishezon");
    read(m, "siegel_log_c", c.moishezon.siegel_log_c, "moishezon");
  }
  if (j.contains("output")) {
    reject_unknown(j.at("output"), "output", {"dir"});
    read(j.at("output"), "dir", c.output_dir, "output");
  }
  read(j, "seed", c.seed, "config");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  if (c.p_list.empty()) throw ConfigurationError("sampling.p_list must not be empty");
  for (size_t i = 0; i < c.p_list.size(); ++i) {
    if (c.p_list[i] < 1) throw ConfigurationError("sampling.p_list entries must be >= 1");
    if (i > 0 && c.p_list[i] <= c.p_list[i - 1])
      throw ConfigurationError("sampling.p_list must be strictly increasing");
  }
  for (double u : c.u_list)
    if (!(u > 0.0)) throw ConfigurationError("sampling.u_list entries must be > 0");
  const int n = c.catalog.dimension();
  for (int q : c.q_list)
    if (q < 0 || q > n) throw ConfigurationError("sampling.q_list entries must lie in 0..n");
  if (c.quadrature_resolution < 2) throw ConfigurationError("quadrature.resolution must be >= 2");
  if (c.spectral_resolution < 8) throw ConfigurationError("spectral.resolution must be >= 8");
  if (!(c.tol_degeneracy > 0.0) || !(c.tol_spectral_gap > 0.0) || !(c.tol_quadrature > 0.0))
    throw ConfigurationError("tolerances must be > 0");
  if (!(c.kernel.delta > 0.0)) throw ConfigurationError("kernel.delta must be > 0");
  for (const auto* set : {&c.kernel.points, &c.kernel.scaled_points})
    for (const auto& pt : *set)
      if (static_cast<int>(pt.size()) != 2 * n)
        throw ConfigurationError("kernel points need 2n reals (re, im per coordinate)");
  for (int p : c.kernel.diagonal_p_list)
    if (p < 1) throw ConfigurationError("kernel.diagonal_p_list entries must be >= 1");
  if (c.moishezon.random_samples < 0)
    throw ConfigurationError("moishezon.random_samples must be >= 0");
  if (c.moishezon.kodaira_p_max < 1) throw ConfigurationError("moishezon.kodaira_p_max must be >= 1");
  if (c.output_dir.empty()) throw ConfigurationError("output.dir must not be empty");
}

json to_json(const RunConfig& c) {
  json j;
  j["catalog"] = to_json(c.catalog);
  j["sampling"] = {{"p_list", c.p_list}, {"u_list", c.u_list}, {"q_list", c.qs(c.catalog.dimension())}};
  j["quadrature"] = {{"resolution", c.quadrature_resolution}};
  j["spectral"] = {{"resolution", c.spectral_resolution}};
  j["tolerances"] = {{"tol_degeneracy", c.tol_degeneracy},
                     {"tol_spectral_gap", c.tol_spectral_gap},
                     {"tol_quadrature", c.tol_quadrature}};
  j["kernel"] = {{"points", c.kernel.points},
                 {"scaled_points", c.kernel.scaled_points},
                 {"delta", c.kernel.delta},
                 {"diagonal_p_list", c.kernel.diagonal_p_list}};
  json m = {{"random_samples", c.moishezon.random_samples},
            {"kodaira_p_max", c.moishezon.kodaira_p_max},
            {"siegel_m", c.moishezon.siegel_m},
            {"siegel_log_c", c.moishezon.siegel_log_c}};
  if (c.moishezon.expect_big_set) m["expect_big"] = c.moishezon.expect_big;
  j["moishezon"] = m;
  j["seed"] = c.seed;
  return j;
}

}  // namespace orbimorse
