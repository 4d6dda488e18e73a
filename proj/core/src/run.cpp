#include "orbimorse/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "orbimorse/cohomology.hpp"
#include "orbimorse/curvature.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/moishezon.hpp"
#include "orbimorse/morse_verify.hpp"
#include "orbimorse/spectral.hpp"

namespace orbimorse {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CVector point_from(const std::vector<double>& v) {
  CVector z(static_cast<Eigen::Index>(v.size() / 2));
  for (Eigen::Index j = 0; j < z.size(); ++j)
    z(j) = Complex(v[2 * static_cast<size_t>(j)], v[2 * static_cast<size_t>(j) + 1]);
  return z;
}

json point_json(const CVector& z) {
  json a = json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    a.push_back(z(j).real());
    a.push_back(z(j).imag());
  }
  return a;
}

struct Context {
  const RunConfig& cfg;
  const RunOptions& opts;
  CatalogModel model;
  json results = json::array();
  json diagnostics = json::array();
  std::map<std::string, std::string> files;
  std::vector<std::string> failures;
  bool warned = false;

  Context(const RunConfig& c, const RunOptions& o) : cfg(c), opts(o) {}
  int n() const { return model.orbifold.dimension; }

  void diag(const std::string& level, const std::string& where, const std::string& msg) {
    diagnostics.push_back({{"level", level}, {"where", where}, {"message", msg}});
    if (level == "warning") warned = true;
  }
  void result(const std::string& sub, const std::string& check, bool pass, json data,
              bool informational = false) {
    const std::string status = informational ? "info" : (pass ? "pass" : "fail");
    results.push_back({{"subcommand", sub}, {"check", check}, {"status", status}, {"data", std::move(data)}});
    if (!informational && !pass) failures.push_back(sub + ": check '" + check + "' failed");
  }
};

void cmd_cohomology(Context& cx) {
  const CohomologyTable t = cohomology_table(cx.model, cx.cfg.p_list, cx.cfg.spectral_resolution);
  json rows = json::array();
  for (int p : t.p_values) rows.push_back({{"p", p}, {"h", t.column(p)}});
  std::ostringstream os;
  write_cohomology_csv(os, t);
  cx.files["cohomology.csv"] = os.str();
  cx.result("cohomology", "cohomology-table", true, {{"n", t.n}, {"rows", rows}}, true);
}

void cmd_curvature_integral(Context& cx) {
  const auto& c = cx.cfg;
  const MorseIntegralTable t =
      morse_integral_table(cx.model.orbifold, cx.model.bundle, c.quadrature_resolution, c.tol_degeneracy);
  const int rank = cx.model.bundle.aux_rank;
  json per_q = json::array();
  double worst = 0.0;
  for (int q : c.qs(cx.n())) {
    const double tel = telescoping_defect(t, q, rank);
    worst = std::max(worst, std::abs(tel));
    per_q.push_back({{"q", q},
                     {"integral_M_q", num(t.by_q[static_cast<size_t>(q)])},
                     {"strong_rhs", num(strong_rhs(t, q, rank))},
                     {"weak_rhs", num(weak_rhs(t, q, rank))},
                     {"telescoping_defect", num(tel)}});
  }
  if (t.degenerate_fraction > 0.0)
    cx.diag("info", "curvature-integral",
            "degenerate quadrature nodes: fraction " + fmt(t.degenerate_fraction));
  cx.result("curvature-integral", "telescoping-identity", worst <= c.tol_quadrature,
            {{"resolution", c.quadrature_resolution},
             {"nodes", t.nodes},
             {"degenerate_fraction", t.degenerate_fraction},
             {"tolerance", c.tol_quadrature},
             {"per_q", per_q}});
}

void cmd_heat_trace(Context& cx) {
  const auto& c = cx.cfg;
  std::vector<SpectralTable> all;
  std::ostringstream hs;
  hs << "p,u,q,trace,h,residual\n";
  json rows = json::array();
  bool ok = true;
  for (int p : c.p_list) {
    const auto tables = spectral_tables(cx.model, p, c.spectral_resolution, c.tol_spectral_gap);
    std::vector<long long> h;
    for (const auto& t : tables) h.push_back(t.zero_dim);
    for (double u : c.u_list) {
      const auto r = morse_sum_vs_trace(tables, u, h);
      for (size_t q = 0; q < r.size(); ++q) {
        const double tr = heat_trace(tables[q], u);
        hs << p << ',' << fmt(u) << ',' << q << ',' << fmt(tr) << ',' << h[q] << ',' << fmt(r[q]) << '\n';
        const bool top = static_cast<int>(q) == cx.n();
        const bool pass = r[q] >= -kChainTol && (!top || std::abs(r[q]) <= kChainTol);
        ok = ok && pass;
        rows.push_back({{"p", p}, {"u", u}, {"q", q}, {"trace", num(tr)}, {"h", h[q]},
                        {"residual", num(r[q])}, {"pass", pass}});
      }
    }
    all.insert(all.end(), tables.begin(), tables.end());
  }
  std::ostringstream ss;
  write_spectral_csv(ss, all);
  cx.files["spectrum.csv"] = ss.str();
  cx.files["heat_trace.csv"] = hs.str();
  cx.result("heat-trace", "morse-sum-vs-heat-trace", ok,
            {{"tolerance", kChainTol}, {"resolution", c.spectral_resolution}, {"rows", rows}});
}

void cmd_verify_morse(Context& cx) {
  const auto& c = cx.cfg;
  const CohomologyTable table = cohomology_table(cx.model, c.p_list, c.spectral_resolution);
  const MorseIntegralTable integrals =
      morse_integral_table(cx.model.orbifold, cx.model.bundle, c.quadrature_resolution, c.tol_degeneracy);
  std::ostringstream os;
  os << "q,p,lhs,rhs,residual,tolerance\n";
  for (int q : c.qs(cx.n())) {
    const StrongMorseSeries s =
        verify_strong_morse(table, integrals, q, cx.model.bundle.aux_rank, c.tol_quadrature);
    json pts = json::array();
    for (const auto& pt : s.points) {
      pts.push_back({{"p", pt.p}, {"lhs", num(pt.lhs)}, {"rhs", num(pt.rhs)},
                     {"residual", num(pt.residual)}, {"tolerance", pt.tolerance}});
      os << q << ',' << pt.p << ',' << fmt(pt.lhs) << ',' << fmt(pt.rhs) << ','
         << fmt(pt.residual) << ',' << fmt(pt.tolerance) << '\n';
    }
    // the residuals decay like 1/p, so a fit over the series reports the order
    std::vector<double> ps, logs;
    for (const auto& pt : s.points) {
      ps.push_back(pt.p);
      logs.push_back(std::abs(pt.residual) > 0.0 ? std::log(std::abs(pt.residual))
                                                  : -std::numeric_limits<double>::infinity());
    }
    const RateFit fit = fit_convergence_order(ps, logs, std::log(kSubtractionFloor));
    json data = {{"q", q},
                 {"points", pts},
                 {"degenerate_fraction", s.degenerate_fraction},
                 {"fit", {{"slope", fit.slope}, {"r2", fit.r2}, {"reliable", fit.reliable},
                          {"below_floor", fit.below_floor}}}};
    if (!s.note.empty()) data["note"] = s.note;
    cx.result("verify-morse", "strong-morse-q" + std::to_string(q), s.consistent, data);
  }
  cx.files["morse_residuals.csv"] = os.str();
}

void cmd_kernel_asymptotics(Context& cx) {
  const auto& c = cx.cfg;
  const auto kind = cx.model.orbifold.kind;
  if (kind == ModelKind::WeightedProjective)
    throw UnsupportedModelError("kernel-asymptotics needs a flat model with an image-sum oracle");
  std::ostringstream reg, sing, diagf;
  reg << "point,u,p,log_error,error,predicted_bound\n";
  sing << "point,u,p,oracle,lim,naive_residual,corrected_residual,envelope\n";
  diagf << "u,p,ratio,expected,deviation\n";
  for (double u : c.u_list) {
    for (size_t i = 0; i < c.kernel.points.size(); ++i) {
      const CVector x = point_from(c.kernel.points[i]);
      RegularAsymptotics r;
      try {
        r = verify_kernel_asymptotics_regular(cx.model, 0, x, u, c.p_list, c.kernel.delta);
      } catch (const DomainError& e) {
        cx.diag("warning", "kernel-asymptotics", "point " + std::to_string(i) + " refused: " + e.what());
        continue;
      }
      json recs = json::array();
      for (const auto& k : r.records) {
        recs.push_back({{"p", k.p}, {"log_error", num(k.log_error)}, {"error", k.error},
                        {"predicted_bound", k.predicted_bound}});
        reg << i << ',' << fmt(u) << ',' << k.p << ',' << fmt(k.log_error) << ',' << fmt(k.error)
            << ',' << fmt(k.predicted_bound) << '\n';
      }
      cx.result("kernel-asymptotics", "regular-rate",
                r.pass,
                {{"point", point_json(x)}, {"u", u}, {"distance", num(r.distance)},
                 {"records", recs},
                 {"fit", {{"slope", r.fit.slope}, {"r2", r.fit.r2}, {"reliable", r.fit.reliable},
                          {"below_floor", r.fit.below_floor}}}});
      if (!r.fit.below_floor && !r.fit.reliable)
        cx.diag("info", "kernel-asymptotics",
                "rate fit for point " + std::to_string(i) + " has R^2 " + fmt(r.fit.r2) + " (unreliable)");
    }
    if (kind != ModelKind::LocalModel) {
      if (!c.kernel.scaled_points.empty())
        cx.diag("info", "kernel-asymptotics", "near-singular checks need a local model; skipped");
      continue;
    }
    for (size_t i = 0; i < c.kernel.scaled_points.size(); ++i) {
      const CVector z = point_from(c.kernel.scaled_points[i]);
      const SingularAsymptotics s = verify_kernel_asymptotics_singular(cx.model, z, u, c.p_list, true);
      json recs = json::array();
      double worst_naive = 0.0;
      for (const auto& r : s.records) {
        worst_naive = std::max(worst_naive, r.naive_residual);
        recs.push_back({{"p", r.p}, {"z", point_json(r.z)}, {"oracle", r.oracle}, {"lim", r.lim},
                        {"naive_residual", r.naive_residual},
                        {"corrected_residual", r.corrected_residual}, {"envelope", r.envelope}});
        sing << i << ',' << fmt(u) << ',' << r.p << ',' << fmt(r.oracle) << ',' << fmt(r.lim) << ','
             << fmt(r.naive_residual) << ',' << fmt(r.corrected_residual) << ',' << fmt(r.envelope)
             << '\n';
      }
      // when the correction is itself negligible there is nothing to shrink
      const bool shrink_ok = worst_naive <= kSubtractionFloor || s.min_shrink >= kMinShrink;
      cx.result("kernel-asymptotics", "near-singular-correction", s.within_envelope && shrink_ok,
                {{"scaled_point", point_json(z)}, {"u", u}, {"records", recs},
                 {"envelope_constant", s.envelope_constant}, {"within_envelope", s.within_envelope},
                 {"min_shrink", num(s.min_shrink)}});
    }
    const auto& dps = c.kernel.diagonal_p_list.empty() ? c.p_list : c.kernel.diagonal_p_list;
    json recs = json::array();
    bool ok = true;
    for (int p : dps) {
      const DiagonalFactor f = singular_diagonal_factor(cx.model, u, p);
      ok = ok && f.deviation <= kDiagonalFactorTol;
      recs.push_back({{"p", p}, {"ratio", f.ratio}, {"expected", f.expected}, {"deviation", f.deviation}});
      diagf << fmt(u) << ',' << p << ',' << fmt(f.ratio) << ',' << f.expected << ',' << fmt(f.deviation) << '\n';
    }
    cx.result("kernel-asymptotics", "singular-diagonal-factor", ok,
              {{"u", u}, {"tolerance", kDiagonalFactorTol}, {"records", recs}});
  }
  cx.files["kernel_regular.csv"] = reg.str();
  if (kind == ModelKind::LocalModel) {
    cx.files["kernel_singular.csv"] = sing.str();
    cx.files["diagonal_factor.csv"] = diagf.str();
  }
}

void cmd_moishezon(Context& cx) {
  const auto& c = cx.cfg;
  const int n = cx.n();
  const CriterionVerdict v = moishezon_check(cx.model, c.quadrature_resolution, c.tol_degeneracy,
                                             c.tol_quadrature, c.seed, c.moishezon.random_samples);
  cx.result("moishezon-check", "criterion", v.implication_holds,
            {{"integral", v.integral}, {"min_eigenvalue", v.min_eigenvalue},
             {"max_min_eigenvalue", v.max_min_eigenvalue}, {"semipositive", v.semipositive},
             {"positive_somewhere", v.positive_somewhere}, {"implication_holds", v.implication_holds},
             {"degenerate_fraction", v.degenerate_fraction}, {"samples", v.samples},
             {"verdict", to_string(v.verdict)}});
  // Kodaira rank up to the first p reaching n
  int best = 0;
  int best_p = 0;
  json ranks = json::array();
  for (int p = 1; p <= c.moishezon.kodaira_p_max; ++p) {
    const KodairaRank k = kodaira_rank(cx.model, p, c.seed);
    json e = {{"p", p}, {"rank", k.rank}, {"sections", k.sections}, {"defined", k.defined}};
    if (!k.note.empty()) e["note"] = k.note;
    ranks.push_back(e);
    if (k.defined && k.rank > best) {
      best = k.rank;
      best_p = p;
    }
    if (best == n) break;
  }
  cx.result("moishezon-check", "kodaira-rank", true,
            {{"max_rank", best}, {"first_p", best_p}, {"per_p", ranks}}, true);

  const CohomologyTable table = cohomology_table(cx.model, c.p_list, c.spectral_resolution);
  try {
    const BignessResult b = bigness_check(table, n);
    const bool agree = b.big == (best == n);
    bool ok = agree;
    if (c.moishezon.expect_big_set && b.big != c.moishezon.expect_big) ok = false;
    json data = {{"estimate", b.estimate}, {"noise", b.noise}, {"tail_points", b.tail_points},
                 {"big", b.big}, {"agrees_with_kodaira_rank", agree}};
    if (c.moishezon.expect_big_set) data["expect_big"] = c.moishezon.expect_big;
    cx.result("moishezon-check", "bigness", ok, data);
  } catch (const DomainError& e) {
    cx.diag("warning", "moishezon-check", std::string("bigness skipped: ") + e.what());
  }

  if (c.moishezon.siegel_m > 0) {
    json recs = json::array();
    bool ok = true;
    const std::uint64_t step = static_cast<std::uint64_t>(std::floor(c.moishezon.siegel_log_c)) + 1;
    for (int p : c.p_list) {
      try {
        const std::uint64_t bound = siegel_bound(c.moishezon.siegel_m, static_cast<std::uint64_t>(n),
                                                 static_cast<std::uint64_t>(p) * step);
        const long long h0 = table.at(p, 0);
        const bool pass = static_cast<std::uint64_t>(std::max(h0, 0LL)) <= bound;
        ok = ok && pass;
        recs.push_back({{"p", p}, {"h0", h0}, {"bound", bound}, {"pass", pass}});
      } catch (const DomainError& e) {
        recs.push_back({{"p", p}, {"h0", table.at(p, 0)}, {"bound", nullptr}, {"pass", true}});
      }
    }
    cx.result("moishezon-check", "siegel-bound", ok, {{"m", c.moishezon.siegel_m}, {"records", recs}});
  }
}

using Handler = std::function<void(Context&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"cohomology", cmd_cohomology},
      {"curvature-integral", cmd_curvature_integral},
      {"heat-trace", cmd_heat_trace},
      {"verify-morse", cmd_verify_morse},
      {"kernel-asymptotics", cmd_kernel_asymptotics},
      {"moishezon-check", cmd_moishezon},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : handlers()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return s;
}

RunOutcome run(const std::string& subcommand, const RunConfig& config, const RunOptions& options) {
  RunOutcome out;
  json meta = {{"schema_version", kReportSchemaVersion},
               {"tool", "orbimorse"},
               {"subcommand", subcommand},
               {"seed", config.seed},
               {"config", to_json(config)}};
  if (!options.timestamp.empty()) meta["timestamp"] = options.timestamp;
  out.report = {{"meta", meta}, {"catalog", nullptr}, {"results", json::array()},
                {"diagnostics", json::array()}};
  auto fail_config = [&](const std::string& msg) {
    out.exit_code = kExitConfigError;
    out.failures.push_back(msg);
    out.report["diagnostics"].push_back({{"level", "error"}, {"where", subcommand}, {"message", msg}});
    return out;
  };
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), subcommand) == subs.end())
    return fail_config("unknown subcommand '" + subcommand + "'");

  Context cx(config, options);
  try {
    validate(config);
    cx.model = build_catalog_orbifold(config.catalog);
  } catch (const Error& e) {
    return fail_config(e.what());
  }
  out.report["catalog"] = {{"spec", to_json(cx.model.spec)},
                           {"description", describe(cx.model.spec)},
                           {"kind", to_string(cx.model.orbifold.kind)},
                           {"dimension", cx.model.orbifold.dimension},
                           {"max_isotropy", cx.model.orbifold.max_isotropy()}};
  try {
    for (const auto& [name, fn] : handlers()) {
      if (subcommand != "all" && subcommand != name) continue;
      if (subcommand == "all") {
        try {
          fn(cx);
        } catch (const UnsupportedModelError& e) {
          cx.diag("info", name, std::string("skipped: ") + e.what());
        }
      } else {
        fn(cx);
      }
    }
  } catch (const Error& e) {
    out.report["results"] = cx.results;
    out.report["diagnostics"] = cx.diagnostics;
    out.files = cx.files;
    return fail_config(e.what());
  }
  out.report["results"] = cx.results;
  out.report["diagnostics"] = cx.diagnostics;
  out.files = std::move(cx.files);
  out.failures = cx.failures;
  if (!out.failures.empty()) out.exit_code = kExitCheckFailed;
  if (options.strict && cx.warned) {
    out.exit_code = kExitCheckFailed;
    out.failures.push_back("strict mode: warnings present");
  }
  return out;
}

void write_artifacts(const RunOutcome& outcome, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigurationError("cannot create output directory '" + dir + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigurationError("cannot write '" + (fs::path(dir) / name).string() + "'");
    f << content;
  };
  put("report.json", outcome.report.dump(2) + "\n");
  for (const auto& [name, content] : outcome.files) put(name, content);
}

}  // namespace orbimorse
