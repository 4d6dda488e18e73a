#include "orbimorse/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "orbimorse/errors.hpp"
#include "orbimorse/quadrature.hpp"

namespace orbimorse {

using nlohmann::json;

int CatalogSpec::dimension() const {
  if (id == "wps") return static_cast<int>(weights.size()) - 1;
  return n;
}

CatalogSpec catalog_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigurationError("catalog entry must be an object");
  CatalogSpec s;
  try {
    s.id = j.at("id").get<std::string>();
    if (j.contains("weights")) s.weights = j.at("weights").get<std::vector<int>>();
    if (j.contains("degree")) s.degree = j.at("degree").get<int>();
    if (j.contains("perturbation")) s.perturbation = j.at("perturbation").get<double>();
    if (j.contains("n")) s.n = j.at("n").get<int>();
    if (j.contains("k")) s.k = j.at("k").get<int>();
    if (j.contains("degrees")) s.degrees = j.at("degrees").get<std::vector<int>>();
    if (j.contains("a")) s.a = j.at("a").get<std::vector<double>>();
    if (j.contains("action_weights"))
      s.action_weights = j.at("action_weights").get<std::vector<int>>();
    if (j.contains("radius")) s.radius = j.at("radius").get<double>();
    if (j.contains("theta")) s.theta = j.at("theta").get<double>();
    if (j.contains("aux_rank")) s.aux_rank = j.at("aux_rank").get<int>();
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("catalog entry: ") + e.what());
  }
  static const std::vector<std::string> known{"id",      "weights",        "degree", "perturbation",
                                              "n",       "k",              "degrees", "a",
                                              "action_weights", "radius",   "theta",  "aux_rank"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigurationError("catalog entry: unknown key '" + it.key() + "'");
  }
  return s;
}

json to_json(const CatalogSpec& s) {
  json j;
  j["id"] = s.id;
  j["aux_rank"] = s.aux_rank;
  if (s.id == "wps") {
    j["weights"] = s.weights;
    j["degree"] = s.degree;
    j["perturbation"] = s.perturbation;
  } else if (s.id == "torus") {
    j["n"] = s.n;
    j["k"] = s.k;
    j["degrees"] = s.degrees;
  } else {
    j["n"] = s.n;
    j["k"] = s.k;
    j["a"] = s.a;
    j["action_weights"] = s.action_weights;
    j["radius"] = s.radius;
    j["theta"] = s.theta;
  }
  return j;
}

std::string describe(const CatalogSpec& s) {
  std::ostringstream os;
  auto list = [&os](const auto& v) {
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  if (s.id == "wps") {
    os << "P(";
    list(s.weights);
    os << ")/O(" << s.degree << ")";
    if (s.perturbation != 0.0) os << "+bump(" << s.perturbation << ")";
  } else if (s.id == "torus") {
    os << "T^" << s.n << "/Z_" << s.k << " d=(";
    list(s.degrees);
    os << ")";
  } else {
    os << "C^" << s.n << "/Z_" << s.k << " a=(";
    list(s.a);
    os << ")";
  }
  if (s.aux_rank != 1) os << " rank " << s.aux_rank;
  return os.str();
}

// ---------------------------------------------------------------------------
// weighted projective spaces

namespace wps {

std::vector<int> chart_weights(const std::vector<int>& weights, int chart) {
  std::vector<int> out;
  for (size_t j = 0; j < weights.size(); ++j) {
    if (static_cast<int>(j) != chart) out.push_back(weights[j]);
  }
  return out;
}

double scale(const std::vector<int>& weights, int chart) {
  return std::sqrt(2.0 / weights[static_cast<size_t>(chart)]);
}

double potential(const std::vector<int>& weights, int chart, const CVector& zraw) {
  const double ai = weights[static_cast<size_t>(chart)];
  const std::vector<int> aj = chart_weights(weights, chart);
  std::vector<double> r2(aj.size());
  // the root is bounded below by every log|z_j|^2 / a_j, and Newton on this
  // convex decreasing function converges monotonically from a lower bound
  double t = 0.0;
  for (size_t j = 0; j < aj.size(); ++j) {
    r2[j] = std::norm(zraw(static_cast<Eigen::Index>(j)));
    if (r2[j] > 0.0) t = std::max(t, std::log(r2[j]) / aj[j]);
  }
  for (int iter = 0; iter < 200; ++iter) {
    double f = std::exp(-ai * t) - 1.0;
    double df = -ai * std::exp(-ai * t);
    for (size_t j = 0; j < aj.size(); ++j) {
      const double e = r2[j] * std::exp(-aj[j] * t);
      f += e;
      df -= aj[j] * e;
    }
    const double dt = -f / df;
    t += dt;
    if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

CMatrix hessian_raw(const std::vector<int>& weights, int chart, const CVector& zraw) {
  const int n = static_cast<int>(weights.size()) - 1;
  const double ai = weights[static_cast<size_t>(chart)];
  const std::vector<int> aj = chart_weights(weights, chart);
  const double t = potential(weights, chart, zraw);
  const double ei = std::exp(-ai * t);
  double s1 = ai * ei;
  double s2 = ai * ai * ei;
  std::vector<double> e(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    e[j] = std::exp(-aj[j] * t);
    const double r2 = std::norm(zraw(j));
    s1 += aj[j] * r2 * e[j];
    s2 += double(aj[j]) * aj[j] * r2 * e[j];
  }
  CVector dbar_t(n), dbar_s1(n);
  for (int m = 0; m < n; ++m) {
    dbar_t(m) = zraw(m) * e[m] / s1;
    dbar_s1(m) = double(aj[m]) * zraw(m) * e[m] - s2 * dbar_t(m);
  }
  // A(l, m) = 2 d_l dbar_m t; the returned matrix is its transpose so that
  // the chart action g acts by g^* H(g z) g
  CMatrix a(n, n);
  for (int l = 0; l < n; ++l) {
    const Complex zl = std::conj(zraw(l));
    for (int m = 0; m < n; ++m) {
      Complex v = -double(aj[l]) * zl * e[l] * dbar_t(m) / s1 - zl * e[l] * dbar_s1(m) / (s1 * s1);
      if (l == m) v += e[l] / s1;
      a(l, m) = 2.0 * v;
    }
  }
  const CMatrix h = a.transpose();
  return 0.5 * (h + h.adjoint());
}

CMatrix metric(const std::vector<int>& weights, int chart, const CVector& w) {
  const double sc = scale(weights, chart);
  return hessian_raw(weights, chart, w / sc) / (sc * sc);
}

namespace {

double smooth_zero(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

double smooth_step(double x, double lo, double hi) {
  const double t = (x - lo) / (hi - lo);
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f = smooth_zero(t);
  return f / (f + smooth_zero(1.0 - t));
}

}  // namespace

double partition(const std::vector<int>& weights, int chart, const CVector& zraw) {
  const int n = static_cast<int>(weights.size()) - 1;
  const std::vector<int> aj = chart_weights(weights, chart);
  std::vector<double> terms;
  terms.push_back(1.0);  // z_chart = 1
  double total = 1.0;
  for (int j = 0; j < n; ++j) {
    const double r2 = std::norm(zraw(j));
    const double tj = r2 > 0.0 ? std::pow(r2, 1.0 / aj[j]) : 0.0;
    terms.push_back(tj);
    total += tj;
  }
  const double lo = 1.0 / (2.0 * (n + 1));
  const double hi = 1.0 / (n + 1);
  double denom = 0.0;
  for (double tj : terms) denom += smooth_step(tj / total, lo, hi);
  return smooth_step(terms[0] / total, lo, hi) / denom;
}

namespace {

// Radial geodesic length from the center of `chart` out to |w| = r (n = 1).
double radial_length(const std::vector<int>& weights, int chart, double r) {
  if (r <= 0.0) return 0.0;
  static const QuadratureRule rule = gauss_legendre(64);
  double total = 0.0;
  for (size_t i = 0; i < rule.size(); ++i) {
    const double x = 0.5 * r * (rule.nodes[i] + 1.0);
    CVector w(1);
    w(0) = x;
    total += rule.weights[i] * std::sqrt(metric(weights, chart, w)(0, 0).real());
  }
  return 0.5 * r * total;
}

}  // namespace

double singular_distance(const std::vector<int>& weights, int chart, const CVector& w) {
  if (weights.size() != 2)
    throw UnsupportedModelError("wps singular distance is implemented for n = 1 only");
  const int other = 1 - chart;
  const double r_here = std::abs(w(0));
  const double z_here = r_here / scale(weights, chart);
  // raw coordinate of the same point in the other chart
  const double a_here = weights[static_cast<size_t>(chart)];
  const double a_other = weights[static_cast<size_t>(other)];
  const double meridian_here = scale(weights, chart);  // |z|^{2/a} = 1 on the equator
  const double meridian_other = scale(weights, other);
  const double length = radial_length(weights, chart, meridian_here) +
                        radial_length(weights, other, meridian_other);
  const bool near_here = z_here <= 1.0;
  double d_here, d_other;
  if (near_here) {
    d_here = radial_length(weights, chart, r_here);
    d_other = length - d_here;
  } else {
    const double z_other = std::pow(z_here, -a_here / a_other);
    d_other = radial_length(weights, other, z_other * scale(weights, other));
    d_here = length - d_other;
  }
  double best = std::numeric_limits<double>::infinity();
  if (a_here > 1) best = std::min(best, d_here);
  if (a_other > 1) best = std::min(best, d_other);
  return best;
}

}  // namespace wps

namespace {

std::vector<GroupElement> cyclic_group(int k, const std::vector<int>& exponents, double theta,
                                       int aux_rank) {
  const int n = static_cast<int>(exponents.size());
  std::vector<GroupElement> g;
  for (int m = 0; m < k; ++m) {
    GroupElement e;
    e.matrix = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const long long ex = (static_cast<long long>(m) * exponents[j]) % k;
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(ex) / k;
      // exact values at the quarter turns keep products closed to rounding
      Complex v = std::polar(1.0, ang);
      if (ex == 0) v = 1.0;
      else if (2 * ex == k) v = -1.0;
      else if (4 * ex == k) v = Complex(0.0, 1.0);
      else if (4 * ex == 3 * k) v = Complex(0.0, -1.0);
      e.matrix(j, j) = v;
    }
    e.line_phase = std::remainder(m * theta, 2.0 * std::numbers::pi);
    e.aux_action = CMatrix::Identity(aux_rank, aux_rank);
    g.push_back(std::move(e));
  }
  return g;
}

int gcd_list(const std::vector<int>& v) {
  int g = 0;
  for (int x : v) g = std::gcd(g, x);
  return g;
}

CatalogModel build_wps(const CatalogSpec& spec) {
  const std::vector<int>& a = spec.weights;
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 1) throw ConfigurationError("wps: need at least two weights");
  for (int x : a) {
    if (x < 1) throw ConfigurationError("wps: weights must be positive integers");
  }
  if (gcd_list(a) != 1) throw ConfigurationError("wps: weights are not coprime");
  // for n >= 2 a common factor of n weights gives codimension-one isotropy
  for (int i = 0; n >= 2 && i <= n; ++i) {
    if (gcd_list(wps::chart_weights(a, i)) != 1)
      throw ConfigurationError("wps: weights are not well-formed (some n of them share a factor)");
  }
  if (spec.perturbation != 0.0 && n != 1)
    throw ConfigurationError("wps: curvature perturbation is only defined for n = 1");
  if (spec.aux_rank < 1) throw ConfigurationError("aux_rank must be >= 1");

  CatalogModel model;
  model.spec = spec;
  auto& orb = model.orbifold;
  orb.catalog_id = describe(spec);
  orb.kind = ModelKind::WeightedProjective;
  orb.dimension = n;
  for (int i = 0; i <= n; ++i) {
    OrbifoldChart chart;
    chart.dimension = n;
    // theta_g: the section z_i^{d/a_i} picks up zeta^{m d}
    const double theta = 2.0 * std::numbers::pi * spec.degree / a[static_cast<size_t>(i)];
    chart.group = cyclic_group(a[static_cast<size_t>(i)], wps::chart_weights(a, i), theta,
                               spec.aux_rank);
    chart.metric_field = [a, i](const CVector& w) { return wps::metric(a, i, w); };
    orb.charts.push_back(std::move(chart));
  }
  if (n == 1) {
    orb.singular_locus_fn = [a](int chart, const CVector& w) {
      return wps::singular_distance(a, chart, w);
    };
  } else {
    orb.singular_locus_fn = [](int, const CVector&) -> double {
      throw UnsupportedModelError("wps singular distance is implemented for n = 1 only");
    };
  }
  orb.quadrature = [a, n](int resolution) {
    int m = resolution;
    if (n == 2) m = std::min(resolution, 24);
    if (n >= 3) m = std::min(resolution, 10);
    std::vector<QuadratureNode> nodes;
    for (int i = 0; i <= n; ++i) {
      const std::vector<int> aj = wps::chart_weights(a, i);
      const double sc = wps::scale(a, i);
      std::vector<QuadratureRule> rules;
      for (int j = 0; j < n; ++j) {
        const double half = std::pow(2.0 * n + 1.0, aj[j] / 2.0) * sc;
        rules.push_back(gauss_legendre(m, -half, half));
      }
      const double inv_group = 1.0 / a[static_cast<size_t>(i)];
      std::vector<int> idx(static_cast<size_t>(2 * n), 0);
      while (true) {
        CVector w(n);
        double wt = inv_group;
        for (int j = 0; j < n; ++j) {
          const auto& r = rules[static_cast<size_t>(j)];
          w(j) = Complex(r.nodes[idx[2 * j]], r.nodes[idx[2 * j + 1]]);
          wt *= r.weights[idx[2 * j]] * r.weights[idx[2 * j + 1]];
        }
        const double psi = wps::partition(a, i, w / sc);
        if (psi > 0.0) nodes.push_back({i, w, wt * psi});
        int d = 0;
        while (d < 2 * n && ++idx[d] == m) idx[d++] = 0;
        if (d == 2 * n) break;
      }
    }
    return nodes;
  };

  auto& bundle = model.bundle;
  bundle.aux_rank = spec.aux_rank;
  const double deg = spec.degree;
  const double eps = spec.perturbation;
  for (int i = 0; i <= n; ++i) {
    bundle.curvature_field.push_back([a, i, deg, eps](const CVector& w) {
      CMatrix r = deg * wps::metric(a, i, w);
      if (eps == 0.0) return r;
      // exact bump 2 d dbar (eps sigma^2 / a0) exp(-s / sigma^2), s = |z_1|^2 in chart 0
      const double a0 = a[0], a1 = a[1];
      const double sigma = 0.15 * std::pow(3.0, -a1 / 2.0);
      const double s_cut = std::pow(0.9 * std::pow(3.0, -a1 / 2.0), 2);
      const double sc = wps::scale(a, i);
      const double zr = std::abs(w(0)) / sc;
      double s, jac;
      if (i == 0) {
        s = zr * zr;
        jac = 1.0;
      } else {
        if (zr == 0.0) return r;
        s = std::pow(zr, -2.0 * a1 / a0);
        jac = (a1 / a0) * (a1 / a0) * std::pow(zr, -2.0 * a1 / a0 - 2.0);
      }
      if (s >= s_cut) return r;
      const double b = std::exp(-s / (sigma * sigma));
      const double raw0 = eps * (2.0 / a0) * b * (s / (sigma * sigma) - 1.0);
      r(0, 0) += raw0 * jac / (sc * sc);
      return r;
    });
  }
  return model;
}

CatalogModel build_torus(const CatalogSpec& in) {
  CatalogSpec spec = in;
  const int n = spec.n;
  if (n < 1) throw ConfigurationError("torus: n must be >= 1");
  if (spec.k != 1 && spec.k != 2 && spec.k != 4)
    throw ConfigurationError("torus: k must divide the symmetry of the square lattice (1, 2 or 4)");
  if (spec.degrees.empty()) spec.degrees.assign(static_cast<size_t>(n), spec.degree);
  if (static_cast<int>(spec.degrees.size()) != n)
    throw ConfigurationError("torus: degrees must have n entries");
  if (spec.aux_rank < 1) throw ConfigurationError("aux_rank must be >= 1");

  CatalogModel model;
  model.spec = spec;
  auto& orb = model.orbifold;
  orb.catalog_id = describe(spec);
  orb.kind = ModelKind::TorusQuotient;
  orb.dimension = n;
  OrbifoldChart chart;
  chart.dimension = n;
  chart.group = cyclic_group(spec.k, std::vector<int>(static_cast<size_t>(n), 1), 0.0,
                             spec.aux_rank);
  chart.metric_field = [n](const CVector&) { return CMatrix::Identity(n, n).eval(); };
  orb.charts.push_back(std::move(chart));
  const int k = spec.k;
  orb.singular_locus_fn = [k](int, const CVector& z) {
    if (k == 1) return std::numeric_limits<double>::infinity();
    // the singular set is the half-period lattice for k = 2 and k = 4
    double s = 0.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      for (double c : {z(j).real(), z(j).imag()}) {
        const double d = std::abs(c - 0.5 * std::round(2.0 * c));
        s += d * d;
      }
    }
    return std::sqrt(s);
  };
  orb.quadrature = [n, k](int resolution) {
    int m = resolution;
    if (n == 2) m = std::min(resolution, 20);
    if (n >= 3) m = std::min(resolution, 8);
    const QuadratureRule rule = periodic_trapezoid(m, 0.0, 1.0);
    std::vector<QuadratureNode> nodes;
    std::vector<int> idx(static_cast<size_t>(2 * n), 0);
    while (true) {
      CVector z(n);
      double wt = 1.0 / k;
      for (int j = 0; j < n; ++j) {
        z(j) = Complex(rule.nodes[idx[2 * j]], rule.nodes[idx[2 * j + 1]]);
        wt *= rule.weights[idx[2 * j]] * rule.weights[idx[2 * j + 1]];
      }
      nodes.push_back({0, z, wt});
      int d = 0;
      while (d < 2 * n && ++idx[d] == m) idx[d++] = 0;
      if (d == 2 * n) break;
    }
    return nodes;
  };
  auto& bundle = model.bundle;
  bundle.aux_rank = spec.aux_rank;
  CMatrix curv = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) curv(j, j) = 2.0 * std::numbers::pi * spec.degrees[j];
  bundle.curvature_field.push_back([curv](const CVector&) { return curv; });
  return model;
}

CatalogModel build_local(const CatalogSpec& in) {
  CatalogSpec spec = in;
  const int n = spec.n;
  if (n < 1) throw ConfigurationError("local-model: n must be >= 1");
  if (spec.k < 1) throw ConfigurationError("local-model: k must be >= 1");
  if (spec.a.empty()) spec.a.assign(static_cast<size_t>(n), 1.0);
  if (spec.action_weights.empty()) spec.action_weights.assign(static_cast<size_t>(n), 1);
  if (static_cast<int>(spec.a.size()) != n)
    throw ConfigurationError("local-model: a must have n entries");
  if (static_cast<int>(spec.action_weights.size()) != n)
    throw ConfigurationError("local-model: action_weights must have n entries");
  std::vector<int> g = spec.action_weights;
  g.push_back(spec.k);
  if (gcd_list(g) != 1)
    throw ConfigurationError("local-model: action is not effective (gcd of k and weights > 1)");
  if (!(spec.radius > 0.0)) throw ConfigurationError("local-model: radius must be positive");
  if (spec.aux_rank < 1) throw ConfigurationError("aux_rank must be >= 1");

  CatalogModel model;
  model.spec = spec;
  auto& orb = model.orbifold;
  orb.catalog_id = describe(spec);
  orb.kind = ModelKind::LocalModel;
  orb.dimension = n;
  OrbifoldChart chart;
  chart.dimension = n;
  chart.radius = spec.radius;
  chart.group = cyclic_group(spec.k, spec.action_weights, spec.theta, spec.aux_rank);
  chart.metric_field = [n](const CVector&) { return CMatrix::Identity(n, n).eval(); };
  orb.charts.push_back(chart);
  const auto group = chart.group;
  orb.singular_locus_fn = [group](int, const CVector& z) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t m = 1; m < group.size(); ++m) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < z.size(); ++j) {
        if (std::abs(group[m].matrix(j, j) - 1.0) > kUnitaryTol) s += std::norm(z(j));
      }
      best = std::min(best, std::sqrt(s));
    }
    return best;
  };
  const double radius = spec.radius;
  const int k = spec.k;
  orb.quadrature = [n, k, radius](int resolution) {
    int mr = resolution, ma = resolution;
    if (n == 2) {
      mr = std::min(resolution, 32);
      ma = std::min(resolution, 16);
    } else if (n >= 3) {
      mr = std::min(resolution, 10);
      ma = std::min(resolution, 6);
    }
    const QuadratureRule base = gauss_legendre(mr);
    const QuadratureRule ang = periodic_trapezoid(ma, 0.0, 2.0 * std::numbers::pi);
    std::vector<QuadratureNode> nodes;
    // s_j = |z_j|^2 on the simplex sum s_j <= R^2, nested Gauss-Legendre;
    // Lebesgue measure is prod (1/2) ds_j dtheta_j
    std::vector<int> ridx(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<double> s(static_cast<size_t>(n));
      double remaining = radius * radius;
      double wr = 1.0;
      for (int j = 0; j < n; ++j) {
        const double x = 0.5 * (base.nodes[ridx[j]] + 1.0);
        s[j] = remaining * x;
        wr *= 0.5 * remaining * base.weights[ridx[j]] * 0.5;
        remaining -= s[j];
      }
      std::vector<int> aidx(static_cast<size_t>(n), 0);
      while (true) {
        CVector z(n);
        double wt = wr / k;
        for (int j = 0; j < n; ++j) {
          z(j) = std::polar(std::sqrt(s[j]), ang.nodes[aidx[j]]);
          wt *= ang.weights[aidx[j]];
        }
        nodes.push_back({0, z, wt});
        int d = 0;
        while (d < n && ++aidx[d] == ma) aidx[d++] = 0;
        if (d == n) break;
      }
      int d = 0;
      while (d < n && ++ridx[d] == mr) ridx[d++] = 0;
      if (d == n) break;
    }
    return nodes;
  };
  auto& bundle = model.bundle;
  bundle.aux_rank = spec.aux_rank;
  CMatrix curv = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) curv(j, j) = spec.a[j];
  bundle.curvature_field.push_back([curv](const CVector&) { return curv; });
  return model;
}

}  // namespace

CatalogModel build_catalog_orbifold(const CatalogSpec& spec) {
  CatalogModel model;
  if (spec.id == "wps") model = build_wps(spec);
  else if (spec.id == "torus") model = build_torus(spec);
  else if (spec.id == "local-model") model = build_local(spec);
  else throw ConfigurationError("unknown catalog id '" + spec.id + "'");
  for (const auto& chart : model.orbifold.charts) validate_chart(chart, model.bundle.aux_rank);
  validate_bundle(model.orbifold, model.bundle);
  return model;
}

CatalogModel build_catalog_orbifold(const std::string& id, const json& params) {
  json j = params.is_null() ? json::object() : params;
  j["id"] = id;
  return build_catalog_orbifold(catalog_spec_from_json(j));
}

}  // namespace orbimorse
