#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orbimorse/catalog.hpp"

namespace orbimorse {

inline constexpr const char* kReportSchemaVersion = "1.0";

// One kernel sample point: 2n reals (re, im per coordinate).
struct KernelSection {
  std::vector<std::vector<double>> points;         // regular-point checks
  std::vector<std::vector<double>> scaled_points;  // near-singular, in units of p^{-1/2}
  double delta = 0.1;                              // refusal distance to the singular set
  std::vector<int> diagonal_p_list;                // singular diagonal factor
};

struct MoishezonSection {
  int random_samples = 256;
  bool expect_big = false;
  bool expect_big_set = false;
  int kodaira_p_max = 16;
  // Siegel consistency check, skipped when siegel_m == 0.
  std::uint64_t siegel_m = 0;
  double siegel_log_c = 0.0;
};

struct RunConfig {
  CatalogSpec catalog;
  std::vector<int> p_list{8, 16, 32, 64};
  std::vector<double> u_list{0.5, 1.0, 5.0, 50.0};
  std::vector<int> q_list;  // empty means 0..n
  int quadrature_resolution = 128;
  int spectral_resolution = 64;
  double tol_degeneracy = 1e-8;
  double tol_spectral_gap = 1e-6;
  double tol_quadrature = 1e-3;
  KernelSection kernel;
  MoishezonSection moishezon;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // q_list with the default filled in for dimension n.
  std::vector<int> qs(int n) const;
};

// Parses and validates. Throws ConfigurationError naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);
nlohmann::json to_json(const RunConfig& c);

}  // namespace orbimorse
