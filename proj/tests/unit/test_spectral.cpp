#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/spectral.hpp"

using namespace orbimorse;
using namespace testing_helpers;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Spectral, LandauLevelsOnTheTorus) {
  const int p = 3;
  const auto t = spectral_tables(make_torus(1, 1, {1}), p, 64);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].zero_dim, p);
  EXPECT_EQ(t[1].zero_dim, 0);
  // first excited level: omega = 2 pi p, multiplicity p on functions and on forms
  ASSERT_GE(t[0].levels.size(), 2u);
  EXPECT_NEAR(t[0].levels[1].lambda, 2 * kPi * p, 1e-6 * 2 * kPi * p);
  EXPECT_EQ(t[0].levels[1].multiplicity, p);
  EXPECT_NEAR(t[1].levels[0].lambda, 2 * kPi * p, 1e-6 * 2 * kPi * p);
}

TEST(Spectral, NegativeDegreeMovesKernelToForms) {
  const auto t = spectral_tables(make_torus(1, 1, {-1}), 4, 64);
  EXPECT_EQ(t[0].zero_dim, 0);
  EXPECT_EQ(t[1].zero_dim, 4);
}

TEST(Spectral, ReflectionQuotientCountsEvenThetas) {
  for (int p : {2, 3, 4, 7}) {
    const auto t = spectral_tables(make_torus(1, 2, {1}), p, 64);
    EXPECT_EQ(t[0].zero_dim, p / 2 + 1) << p;
    EXPECT_EQ(t[1].zero_dim, 0);
  }
}

TEST(Spectral, FlatTorusFourierModes) {
  const auto t = spectral_tables(make_torus(1, 1, {0}), 1, 16);
  EXPECT_EQ(t[0].zero_dim, 1);
  EXPECT_EQ(t[1].zero_dim, 1);
  EXPECT_NEAR(t[0].levels[1].lambda, 2 * kPi * kPi, 1e-9);
  EXPECT_EQ(t[0].levels[1].multiplicity, 4);
  // dz-bar is odd under z -> -z
  const auto q = spectral_tables(make_torus(1, 2, {0}), 1, 16);
  EXPECT_EQ(q[0].zero_dim, 1);
  EXPECT_EQ(q[1].zero_dim, 0);
}

TEST(Spectral, KunnethForMixedSignature) {
  const auto t = spectral_tables(make_torus(2, 1, {2, -1}), 2, 32);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].zero_dim, 0);
  EXPECT_EQ(t[1].zero_dim, 8);
  EXPECT_EQ(t[2].zero_dim, 0);
}

TEST(Spectral, ChainIdentityIsExact) {
  const auto m = make_torus(2, 2, {1, 1});
  for (int p : {2, 4}) {
    const auto t = spectral_tables(m, p, 32);
    std::vector<long long> h;
    for (const auto& x : t) h.push_back(x.zero_dim);
    for (double u : {0.5, 1.0, 5.0}) {
      const auto r = morse_sum_vs_trace(t, u, h);
      for (double x : r) EXPECT_GE(x, -1e-9);
      EXPECT_NEAR(r.back(), 0.0, 1e-9);
    }
  }
}

TEST(Spectral, HeatTraceLimitIsKernelDimension) {
  const auto t = spectral_tables(make_torus(1, 1, {1}), 5, 64);
  EXPECT_NEAR(heat_trace(t[0], 200.0), 5.0, 1e-12);
}

TEST(Spectral, ResolutionMustBePowerOfTwo) {
  EXPECT_THROW(spectral_tables(make_torus(1, 1, {1}), 2, 48), DomainError);
  EXPECT_THROW(spectral_tables(make_wps({1, 1}, 1), 2, 32), UnsupportedModelError);
  EXPECT_THROW(spectral_tables(make_torus(1, 4, {1}), 2, 32), UnsupportedModelError);
}

TEST(Spectral, MakeTableSnapsAndMerges) {
  const auto t = make_table(1, 0, 8, {{1e-12, 1}, {1.0, 2}, {1.0 + 1e-12, 1}, {3.0, 1}});
  EXPECT_EQ(t.zero_dim, 1);
  ASSERT_EQ(t.levels.size(), 3u);
  EXPECT_EQ(t.levels[1].multiplicity, 3);
  EXPECT_EQ(t.total_multiplicity(), 5);
}

TEST(Spectral, AssembledComplexMatchesSectorTables) {
  const auto m = make_torus(1, 2, {1});
  const DiscreteComplex c = assemble_kodaira_laplacian(m, 3, 16);
  const auto l0 = eigenvalues(c.laplacian(0));
  int zeros = 0;
  for (double x : l0) zeros += std::abs(x) < 1e-8;
  EXPECT_EQ(zeros, 2);
  // every nonzero eigenvalue appears in consecutive degrees with matching ranks
  double first = 0.0;
  for (double x : l0)
    if (x > 1e-6) {
      first = x;
      break;
    }
  const auto rep = eigencomplex_check(c, first);
  ASSERT_FALSE(rep.skipped) << rep.message;
  EXPECT_EQ(rep.max_residual, 0.0);
  EXPECT_EQ(rep.alternating.back(), 0);
  EXPECT_TRUE(eigencomplex_check(c, 0.0).skipped);
}

TEST(Spectral, CsvColumns) {
  std::ostringstream os;
  write_spectral_csv(os, {make_table(2, 1, 8, {{0.0, 1}, {4.0, 2}})});
  EXPECT_EQ(os.str(), "p,q,lambda,multiplicity\n2,1,0,1\n2,1,4,2\n");
}
