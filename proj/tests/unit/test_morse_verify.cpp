#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/morse_verify.hpp"

using namespace orbimorse;
using namespace testing_helpers;

TEST(RateFit, RecoversPowerLaw) {
  std::vector<double> p, e;
  for (double x : {8.0, 16.0, 32.0, 64.0}) {
    p.push_back(x);
    e.push_back(std::log(3.0 * std::pow(x, -0.5)));
  }
  const auto f = fit_convergence_order(p, e, std::log(1e-12));
  EXPECT_NEAR(f.slope, -0.5, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_TRUE(f.reliable);
}

TEST(RateFit, UsesLargestRunAboveFloor) {
  const double floor = std::log(1e-12);
  const auto f = fit_convergence_order({1, 2, 4, 8, 16}, {std::log(1e-13), -1.0, -2.0, std::log(1e-14), -5.0}, floor);
  EXPECT_EQ(f.first, 1);
  EXPECT_EQ(f.last, 2);
  const auto g = fit_convergence_order({1, 2}, {std::log(1e-13), std::log(1e-14)}, floor);
  EXPECT_TRUE(g.below_floor);
  EXPECT_THROW(fit_convergence_order({1, 2}, {0.0}, floor), DomainError);
}

TEST(StrongMorse, ProjectiveLineExact) {
  const auto m = make_wps({1, 1}, 1);
  const std::vector<int> ps{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  const auto s1 = verify_strong_morse(m, 1, ps, 256);
  for (const auto& pt : s1.points) {
    EXPECT_NEAR(pt.lhs, -(pt.p + 1.0) / pt.p, 1e-15);
    EXPECT_NEAR(pt.residual, -1.0 / pt.p, 1e-6);
    EXPECT_LE(std::abs(pt.residual), 2.0 / pt.p);
  }
  EXPECT_TRUE(s1.consistent);
  const auto s0 = verify_strong_morse(m, 0, ps, 256);
  EXPECT_NEAR(s0.points.back().residual, 1.0 / 4096, 1e-6);
  EXPECT_TRUE(s0.consistent);
}

TEST(StrongMorse, WeightedLineExact) {
  const auto m = make_wps({1, 2}, 1);
  const auto s = verify_strong_morse(m, 0, {10, 11, 100, 101}, 256);
  for (const auto& pt : s.points)
    EXPECT_NEAR(pt.lhs, double(pt.p / 2 + 1) / pt.p, 1e-15);
}

TEST(StrongMorse, NegativeLineHasNoSections) {
  const auto s = verify_strong_morse(make_wps({1, 1}, -1), 0, {4, 8, 16}, 64);
  for (const auto& pt : s.points) {
    EXPECT_EQ(pt.lhs, 0.0);
    EXPECT_NEAR(pt.rhs, 0.0, 1e-15);
  }
}

TEST(StrongMorse, TelescopingIdentity) {
  const auto m = make_wps({1, 1}, 1, 3.0);
  const auto t = morse_integral_table(m.orbifold, m.bundle, 128);
  for (int q = 0; q <= 1; ++q) EXPECT_NEAR(telescoping_defect(t, q, 1), 0.0, 1e-12);
}

TEST(StrongMorse, DetectsGrowingResidual) {
  CohomologyTable t;
  t.n = 1;
  t.p_values = {1, 2, 3, 4};
  for (int p : t.p_values) {
    t.entries[{p, 0}] = 2LL * p * p;  // quadratic growth violates the inequality
    t.entries[{p, 1}] = 0;
  }
  MorseIntegralTable in;
  in.by_q = {1.0, 0.0};
  const auto s = verify_strong_morse(t, in, 0, 1, 1e-3);
  EXPECT_FALSE(s.consistent);
  EXPECT_FALSE(s.note.empty());
}

TEST(KernelRegular, TrivialGroupHasZeroError) {
  const auto m = make_local(1, {1.0}, {1});
  const auto r = verify_kernel_asymptotics_regular(m, 0, pt({{1.0, 0.0}}), 1.0, {64, 128});
  EXPECT_TRUE(r.fit.below_floor);
  EXPECT_TRUE(r.pass);
  for (const auto& k : r.records) EXPECT_EQ(k.error, 0.0);
}

TEST(KernelRegular, ReflectionErrorIsGaussianImage) {
  // C/Z_2, a = 1, u = 1, x = 1: error = Lim_u * exp(-(1/2) F1 |2 sqrt(p)|^2)
  const auto m = make_local(2, {1.0}, {1});
  const auto r = verify_kernel_asymptotics_regular(m, 0, pt({{1.0, 0.0}}), 1.0, {64, 128, 256});
  const double f1 = 0.5 / std::tanh(0.5);
  for (const auto& k : r.records) {
    const double expect = std::log(1.0 / (1 - std::exp(-1.0)) / (2 * M_PI)) - 0.5 * f1 * 4.0 * k.p;
    EXPECT_NEAR(k.log_error, expect, 1e-9);
  }
  EXPECT_LT(r.fit.slope, -0.4);
  EXPECT_TRUE(r.pass);
}

TEST(KernelRegular, RefusesPointsNearSingularities) {
  const auto m = make_local(2, {1.0}, {1});
  try {
    verify_kernel_asymptotics_regular(m, 0, pt({{0.05, 0.0}}), 1.0, {64});
    FAIL() << "expected refusal";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("distance"), std::string::npos);
  }
}

TEST(KernelRegular, TorusQuotientRate) {
  const auto m = make_torus(1, 2, {1});
  const auto r = verify_kernel_asymptotics_regular(m, 0, pt({{0.25, 0.25}}), 1.0, {64, 128, 256, 512, 1024, 2048, 4096});
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.fit.slope, -0.4);
}

TEST(KernelSingular, DiagonalFactorEqualsGroupOrder) {
  for (int k : {1, 2, 3, 5}) {
    const auto f = singular_diagonal_factor(make_local(k, {1.0}, {1}), 1.0, 1024);
    EXPECT_EQ(f.expected, k);
    EXPECT_NEAR(f.ratio, k, 1e-12);
  }
  // on (0,1)-forms the twist enters through gamma: C^2/Z_2 with weights (1, 1)
  const auto f = singular_diagonal_factor(make_local(2, {1.0, 2.0}, {1, 1}), 1.0, 64, 0);
  EXPECT_NEAR(f.ratio, 2.0, 1e-12);
}

TEST(KernelSingular, CorrectionShrinksResidual) {
  const auto m = make_local(3, {1.0}, {1});
  const auto s = verify_kernel_asymptotics_singular(m, pt({{1.0, 0.0}}), 1.0, {256, 1024}, true);
  EXPECT_TRUE(s.within_envelope);
  EXPECT_GE(s.min_shrink, 10.0);
  for (const auto& r : s.records) EXPECT_NEAR(r.z.norm() * std::sqrt(double(r.p)), 1.0, 1e-12);
}

TEST(KernelSingular, FarFromStrataCorrectionIsNegligible) {
  const auto m = make_local(2, {1.0}, {1});
  const auto s = verify_kernel_asymptotics_singular(m, pt({{10.0, 0.0}}), 1.0, {256}, true);
  EXPECT_LT(s.records[0].naive_residual, 1e-30);
}

TEST(KernelSingular, Preconditions) {
  EXPECT_THROW(verify_kernel_asymptotics_singular(make_local(2, {1.0}, {1}, 1.0), pt({{0.6, 0.0}}), 1.0, {4}, false),
               DomainError);
  EXPECT_THROW(singular_diagonal_factor(make_wps({1, 1}, 1), 1.0, 4), UnsupportedModelError);
}
