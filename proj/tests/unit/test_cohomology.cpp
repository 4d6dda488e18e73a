#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "orbimorse/cohomology.hpp"
#include "orbimorse/errors.hpp"

using namespace orbimorse;
using namespace testing_helpers;

TEST(LatticeCount, KnownValues) {
  EXPECT_EQ(weighted_proj_h0({1, 1}, 5), 6);
  EXPECT_EQ(weighted_proj_h0({1, 2}, 5), 3);
  EXPECT_EQ(weighted_proj_h0({2, 3}, 1), 0);
  EXPECT_EQ(weighted_proj_h0({2, 3}, 6), 2);
  EXPECT_EQ(weighted_proj_h0({1, 1, 1}, 2), 6);
  EXPECT_EQ(weighted_proj_h0({1, 1}, -1), 0);
  EXPECT_EQ(weighted_proj_h0({1, 1}, 0), 1);
}

TEST(LatticeCount, ClosedFormMatchesBruteForce) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 3}, {3, 7}, {5, 8}})
    for (int d = 0; d <= 500; ++d)
      ASSERT_EQ(weighted_proj_h0_two(a, b, d), weighted_proj_h0_bruteforce({a, b}, d)) << a << "," << b << " d=" << d;
}

TEST(LatticeCount, DynamicProgramMatchesBruteForce) {
  for (const auto& w : std::vector<std::vector<int>>{{1, 1, 1}, {1, 2, 3}, {2, 3, 5}, {1, 1, 2, 3}})
    for (int d = 0; d <= 200; ++d) ASSERT_EQ(weighted_proj_h0_dp(w, d), weighted_proj_h0_bruteforce(w, d));
}

TEST(LatticeCount, LargeDegreeUsesPolynomialGrowth) {
  // number of monomials of degree d in three variables
  const long long d = 100000;
  EXPECT_EQ(weighted_proj_h0({1, 1, 1}, d), (d + 1) * (d + 2) / 2);
}

TEST(CohomologyTable, ProjectiveLineBothSides) {
  const auto t = cohomology_table(make_wps({1, 1}, 1), {1, 2, 3});
  EXPECT_EQ(t.column(3), (std::vector<long long>{4, 0}));
  // O(-3): h^1 = h^0(O(1)) = 2 by Serre duality
  const auto neg = cohomology_table(make_wps({1, 1}, -3), {1});
  EXPECT_EQ(neg.column(1), (std::vector<long long>{0, 2}));
}

TEST(CohomologyTable, WeightedLine) {
  const auto t = cohomology_table(make_wps({1, 2}, 1), {1, 2, 7});
  EXPECT_EQ(t.at(1, 0), 1);
  EXPECT_EQ(t.at(2, 0), 2);
  EXPECT_EQ(t.at(7, 0), 4);
  EXPECT_THROW(t.at(3, 0), DomainError);
}

TEST(CohomologyTable, TorusFromSpectrum) {
  const auto t = cohomology_table(make_torus(1, 1, {1}), {1, 3, 5});
  EXPECT_EQ(t.column(5), (std::vector<long long>{5, 0}));
  const auto q = cohomology_table(make_torus(1, 2, {1}), {4, 5});
  EXPECT_EQ(q.at(4, 0), 3);
  EXPECT_EQ(q.at(5, 0), 3);
}

TEST(CohomologyTable, LocalModelUnsupported) {
  EXPECT_THROW(cohomology_table(make_local(2, {1.0}, {1}), {1}), UnsupportedModelError);
}

TEST(CohomologyTable, CsvColumns) {
  std::ostringstream os;
  write_cohomology_csv(os, cohomology_table(make_wps({1, 2}, 1), {1, 2}));
  EXPECT_EQ(os.str(), "p,q,h\n1,0,1\n1,1,0\n2,0,2\n2,1,0\n");
}
