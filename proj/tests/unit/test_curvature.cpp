#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "orbimorse/curvature.hpp"
#include "orbimorse/errors.hpp"

using namespace orbimorse;
using namespace testing_helpers;

TEST(Curvature, ProjectiveLineIsPositiveAtCenter) {
  const auto m = make_wps({1, 1}, 1);
  const auto s = curvature_spectrum(m.bundle, m.orbifold, 0, CVector::Zero(1));
  ASSERT_EQ(s.eigenvalues.size(), 1u);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  EXPECT_EQ(s.signature, 0);
}

TEST(Curvature, DegreeScalesEigenvalues) {
  const auto m = make_wps({1, 1}, -3);
  const auto s = curvature_spectrum(m.bundle, m.orbifold, 1, pt({{0.3, -0.4}}));
  EXPECT_NEAR(s.eigenvalues[0], -3.0, 1e-9);
  EXPECT_EQ(s.signature, 1);
}

TEST(Curvature, PerturbationFlipsSignAtCenter) {
  const auto m = make_wps({1, 1}, 1, 3.0);
  const auto s = curvature_spectrum(m.bundle, m.orbifold, 0, CVector::Zero(1));
  EXPECT_NEAR(s.eigenvalues[0], -2.0, 1e-9);
  EXPECT_EQ(s.signature, 1);
}

TEST(Curvature, ClassifyFlagsZeroModes) {
  EXPECT_FALSE(classify_point({-1.0, 1e-10, 2.0}, 1e-8).has_value());
  EXPECT_EQ(classify_point({-1.0, -0.5, 2.0}, 1e-8), 2);
}

TEST(MorseIntegral, ChernNumbersOfWeightedLines) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 3}}) {
    const auto m = make_wps({a, b}, 1);
    EXPECT_NEAR(morse_integral(m.orbifold, m.bundle, {0}, 128).value, 1.0 / (a * b), 1e-3);
    EXPECT_NEAR(morse_integral(m.orbifold, m.bundle, {1}, 32).value, 0.0, 1e-15);
  }
}

TEST(MorseIntegral, PerturbationKeepsTotalDegree) {
  const auto m = make_wps({1, 1}, 1, 3.0);
  const auto t = morse_integral_table(m.orbifold, m.bundle, 256);
  EXPECT_LT(t.by_q[1], 0.0);
  EXPECT_GT(t.by_q[0], 1.0);
  EXPECT_NEAR(t.by_q[0] + t.by_q[1], 1.0, 1e-3);
}

TEST(MorseIntegral, ProjectivePlane) {
  // int c_1^2 / 2! over P^2 with O(1); the n = 2 node cap (24 per direction) limits accuracy to ~2e-3
  const auto m = make_wps({1, 1, 1}, 1);
  EXPECT_NEAR(morse_integral(m.orbifold, m.bundle, {0}, 24).value, 0.5, 3e-3);
}

TEST(MorseIntegral, TorusSignatureSplit) {
  const auto m = make_torus(2, 1, {1, -1});
  const auto t = morse_integral_table(m.orbifold, m.bundle, 8);
  EXPECT_NEAR(t.by_q[0], 0.0, 1e-15);
  EXPECT_NEAR(t.by_q[1], -1.0, 1e-12);
  EXPECT_NEAR(t.by_q[2], 0.0, 1e-15);
}

TEST(MorseIntegral, FlatBundleIsDegenerateEverywhere) {
  const auto m = make_torus(1, 1, {0});
  const auto r = morse_integral(m.orbifold, m.bundle, {0, 1}, 16);
  EXPECT_DOUBLE_EQ(r.degenerate_fraction, 1.0);
  EXPECT_EQ(r.value, 0.0);
}
