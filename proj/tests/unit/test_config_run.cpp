#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbimorse/config.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/run.hpp"

#ifndef ORBIMORSE_TEST_DATA
#define ORBIMORSE_TEST_DATA "."
#endif

using namespace orbimorse;
using nlohmann::json;

namespace {

json base(json catalog) {
  return {{"catalog", catalog}, {"sampling", {{"p_list", {1, 2, 4, 8}}, {"u_list", {1.0}}}}};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse_config(base({{"id", "wps"}}));
  EXPECT_EQ(c.qs(1), (std::vector<int>{0, 1}));
  EXPECT_EQ(c.tol_degeneracy, 1e-8);
  EXPECT_EQ(c.seed, 1u);
}

TEST(Config, RejectsInvalidInput) {
  auto bad = base({{"id", "wps"}});
  bad["sampling"]["p_list"] = {4, 2};
  EXPECT_THROW(parse_config(bad), ConfigurationError);
  bad = base({{"id", "wps"}});
  bad["tolerances"] = {{"tol_quadrature", 0.0}};
  EXPECT_THROW(parse_config(bad), ConfigurationError);
  bad = base({{"id", "wps"}});
  bad["sampling"]["q_list"] = {3};
  EXPECT_THROW(parse_config(bad), ConfigurationError);
  bad = base({{"id", "wps"}});
  bad["verbosity"] = 3;
  EXPECT_THROW(parse_config(bad), ConfigurationError);
  bad = base({{"id", "wps"}});
  bad["sampling"]["u_list"] = "fast";
  EXPECT_THROW(parse_config(bad), ConfigurationError);
  EXPECT_THROW(parse_config(json::object()), ConfigurationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigurationError);
}

TEST(Run, UnknownSubcommandAndCatalogErrorsExitTwo) {
  const RunConfig c = parse_config(base({{"id", "wps"}}));
  EXPECT_EQ(run("plot", c).exit_code, kExitConfigError);
  RunConfig bad = c;
  bad.catalog.weights = {2, 4};
  const auto o = run("cohomology", bad);
  EXPECT_EQ(o.exit_code, kExitConfigError);
  ASSERT_EQ(o.failures.size(), 1u);
  EXPECT_EQ(o.failures[0].find('\n'), std::string::npos);
}

TEST(Run, UnsupportedSubcommandForModelExitsTwo) {
  const RunConfig c = parse_config(base({{"id", "wps"}}));
  EXPECT_EQ(run("heat-trace", c).exit_code, kExitConfigError);
  // "all" skips it instead
  EXPECT_EQ(run("all", c).exit_code, kExitOk);
}

TEST(Run, VerifyMorseOnProjectiveLine) {
  json j = base({{"id", "wps"}, {"weights", {1, 1}}});
  j["sampling"]["p_list"] = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  const auto o = run("verify-morse", parse_config(j));
  EXPECT_EQ(o.exit_code, kExitOk);
  ASSERT_TRUE(o.files.count("morse_residuals.csv"));
  const auto& res = o.report["results"];
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[1]["data"]["points"].size(), 13u);
}

TEST(Run, KernelAsymptoticsOnReflectionQuotient) {
  json j = base({{"id", "local-model"}, {"k", 2}, {"a", {1.0}}, {"action_weights", {1}}, {"radius", 1000.0}});
  j["sampling"]["p_list"] = {64, 128, 256, 512, 1024, 2048, 4096};
  j["kernel"] = {{"points", {{1.0, 0.0}}}, {"scaled_points", {{1.0, 0.0}}}};
  const auto o = run("kernel-asymptotics", parse_config(j));
  EXPECT_EQ(o.exit_code, kExitOk);
  for (const auto& r : o.report["results"]) EXPECT_EQ(r["status"], "pass") << r.dump();
  EXPECT_TRUE(o.files.count("kernel_regular.csv"));
  EXPECT_TRUE(o.files.count("diagonal_factor.csv"));
}

TEST(Run, RefusedPointIsWarningAndStrictFails) {
  json j = base({{"id", "local-model"}, {"k", 2}, {"a", {1.0}}, {"action_weights", {1}}, {"radius", 1000.0}});
  j["kernel"] = {{"points", {{0.01, 0.0}}}};
  const RunConfig c = parse_config(j);
  EXPECT_EQ(run("kernel-asymptotics", c).exit_code, kExitOk);
  RunOptions strict;
  strict.strict = true;
  EXPECT_EQ(run("kernel-asymptotics", c, strict).exit_code, kExitCheckFailed);
}

TEST(Run, ExpectedBigFailureExitsOne) {
  json j = base({{"id", "wps"}, {"weights", {1, 1}}, {"degree", 0}});
  std::vector<int> ps;
  for (int p = 100; p <= 1000; p += 100) ps.push_back(p);
  j["sampling"]["p_list"] = ps;
  j["moishezon"] = {{"expect_big", true}, {"random_samples", 16}};
  j["quadrature"] = {{"resolution", 32}};
  EXPECT_EQ(run("moishezon-check", parse_config(j)).exit_code, kExitCheckFailed);
}

TEST(Run, ReportsAreDeterministic) {
  json j = base({{"id", "wps"}, {"weights", {1, 1}}, {"degree", 1}, {"perturbation", 3.0}});
  j["quadrature"] = {{"resolution", 64}};
  j["moishezon"] = {{"random_samples", 32}};
  const RunConfig c = parse_config(j);
  const auto a = run("all", c);
  const auto b = run("all", c);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.files, b.files);
  RunOptions ts;
  ts.timestamp = "2000-01-01T00:00:00Z";
  auto c2 = run("all", c, ts).report;
  EXPECT_EQ(c2["meta"]["timestamp"], "2000-01-01T00:00:00Z");
  c2["meta"].erase("timestamp");
  EXPECT_EQ(c2.dump(), a.report.dump());
}

TEST(Run, ReportTopLevelShape) {
  const auto o = run("cohomology", parse_config(base({{"id", "wps"}, {"weights", {1, 2}}})));
  for (const char* k : {"meta", "catalog", "results", "diagnostics"}) EXPECT_TRUE(o.report.contains(k)) << k;
  EXPECT_EQ(o.report["meta"]["schema_version"], kReportSchemaVersion);
}

TEST(Golden, CohomologyAndResidualCsv) {
  json j = base({{"id", "wps"}, {"weights", {1, 2}}, {"degree", 1}});
  j["quadrature"] = {{"resolution", 64}};
  const auto coh = run("cohomology", parse_config(j));
  EXPECT_EQ(coh.files.at("cohomology.csv"), slurp(std::string(ORBIMORSE_TEST_DATA) + "/golden_cohomology_p12.csv"));
  const auto res = run("verify-morse", parse_config(j));
  EXPECT_EQ(res.files.at("morse_residuals.csv"), slurp(std::string(ORBIMORSE_TEST_DATA) + "/golden_morse_p12.csv"));
}

TEST(Golden, HeatTraceCsv) {
  json j = base({{"id", "torus"}, {"n", 1}, {"k", 2}, {"degrees", {1}}});
  j["sampling"]["p_list"] = {2, 4};
  j["sampling"]["u_list"] = {1.0, 5.0};
  j["spectral"] = {{"resolution", 16}};
  const auto o = run("heat-trace", parse_config(j));
  EXPECT_EQ(o.exit_code, kExitOk);
  const std::string csv = o.files.at("heat_trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,u,q,trace,h,residual");
  EXPECT_EQ(o.files.at("spectrum.csv").substr(0, 24), "p,q,lambda,multiplicity\n");
}

TEST(Artifacts, WritesReportAndCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "orbimorse_artifacts_test";
  std::filesystem::remove_all(dir);
  const auto o = run("cohomology", parse_config(base({{"id", "wps"}})));
  write_artifacts(o, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "cohomology.csv"));
  EXPECT_EQ(json::parse(slurp((dir / "report.json").string())), o.report);
  std::filesystem::remove_all(dir);
}
