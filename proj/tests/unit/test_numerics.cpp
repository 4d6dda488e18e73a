#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbimorse/linalg.hpp"
#include "orbimorse/parallel.hpp"
#include "orbimorse/quadrature.hpp"

using namespace orbimorse;

TEST(Quadrature, GaussLegendreIsExactForDegree2nMinus1) {
  for (int n : {1, 2, 5, 16}) {
    const auto r = gauss_legendre(n, -1.0, 2.0);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(Quadrature, PeriodicTrapezoidIntegratesTrigExactly) {
  const auto r = periodic_trapezoid(16, 0.0, 1.0);
  double s = 0.0, c = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    s += r.weights[i] * std::pow(std::sin(2 * std::numbers::pi * r.nodes[i]), 2);
    c += r.weights[i] * std::cos(2 * std::numbers::pi * 3 * r.nodes[i]);
  }
  EXPECT_NEAR(s, 0.5, 1e-14);
  EXPECT_NEAR(c, 0.0, 1e-14);
}

TEST(Linalg, ElementarySymmetricSmallCases) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(elementary_symmetric(x, 0), 1.0);
  EXPECT_DOUBLE_EQ(elementary_symmetric(x, 1), 6.0);
  EXPECT_DOUBLE_EQ(elementary_symmetric(x, 2), 11.0);
  EXPECT_DOUBLE_EQ(elementary_symmetric(x, 3), 6.0);
  EXPECT_DOUBLE_EQ(elementary_symmetric(x, 4), 0.0);
}

TEST(Linalg, HermitianEigenReconstructs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  CMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  m = (m + m.adjoint()).eval();
  const auto e = hermitian_eigen(m);
  const CMatrix back = hermitian_function(e, [](double x) { return x; });
  EXPECT_LT((back - m).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(unitarity_defect(e.vectors), 1e-12);
  for (Eigen::Index i = 1; i < 4; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
}

TEST(Linalg, NumericalRank) {
  RMatrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  EXPECT_EQ(numerical_rank(m, 1e-8), 1);
  m(0, 1) = 0;
  EXPECT_EQ(numerical_rank(m, 1e-8), 2);
}

TEST(Parallel, OrderedSlotsMatchSerial) {
  set_thread_count(4);
  std::vector<double> v(1000);
  parallel_for(v.size(), [&](std::size_t i) { v[i] = std::sqrt(double(i)); });
  for (size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], std::sqrt(double(i)));
  EXPECT_THROW(parallel_for(200, [](std::size_t i) { if (i == 150) throw std::runtime_error("x"); }),
               std::runtime_error);
  set_thread_count(0);
}
