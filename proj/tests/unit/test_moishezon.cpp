#include <gtest/gtest.h>

#include <limits>

#include "helpers.hpp"
#include "orbimorse/cohomology.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/moishezon.hpp"

using namespace orbimorse;
using namespace testing_helpers;

TEST(Siegel, ExamplesAndMonotonicity) {
  EXPECT_EQ(siegel_bound(1, 1, 0), 1u);
  EXPECT_EQ(siegel_bound(3, 2, 2), 18u);
  EXPECT_EQ(siegel_bound(0, 5, 5), 0u);
  EXPECT_EQ(siegel_bound(1, 30, 30), 118264581564861424ull);
  for (std::uint64_t m = 1; m < 4; ++m)
    for (std::uint64_t n = 0; n < 6; ++n)
      for (std::uint64_t k = 0; k < 6; ++k) {
        EXPECT_LE(siegel_bound(m, n, k), siegel_bound(m + 1, n, k));
        EXPECT_LE(siegel_bound(m, n, k), siegel_bound(m, n + 1, k));
        EXPECT_LE(siegel_bound(m, n, k), siegel_bound(m, n, k + 1));
      }
  EXPECT_THROW(siegel_bound(1, 40, 40), DomainError);
  EXPECT_THROW(siegel_bound(std::numeric_limits<std::uint64_t>::max(), 1, 1), DomainError);
}

TEST(Siegel, NeverBelowSectionCounts) {
  // covering data m = 2, k_p = p (log C < 1)
  for (int p = 1; p <= 200; ++p) EXPECT_LE(std::uint64_t(weighted_proj_h0({1, 2}, p)), siegel_bound(2, 1, p));
}

TEST(Bigness, ExactTables) {
  std::vector<int> ps;
  for (int p = 100; p <= 1000; p += 100) ps.push_back(p);
  const auto b1 = bigness_check(cohomology_table(make_wps({1, 1}, 1), ps), 1);
  EXPECT_TRUE(b1.big);
  EXPECT_NEAR(b1.estimate, 1.01, 1e-12);
  const auto b12 = bigness_check(cohomology_table(make_wps({1, 2}, 1), ps), 1);
  EXPECT_TRUE(b12.big);
  EXPECT_NEAR(b12.estimate, 0.51, 1e-12);
  const auto b0 = bigness_check(cohomology_table(make_wps({1, 1}, 0), ps), 1);
  EXPECT_FALSE(b0.big);
  EXPECT_THROW(bigness_check(cohomology_table(make_wps({1, 1}, 1), {1, 2, 3}), 1), DomainError);
}

TEST(Kodaira, Examples) {
  EXPECT_EQ(kodaira_rank(make_wps({1, 1}, 1), 1).rank, 1);
  EXPECT_EQ(kodaira_rank(make_wps({1, 2}, 1), 1).rank, 0);
  EXPECT_EQ(kodaira_rank(make_wps({1, 2}, 1), 2).rank, 1);
  EXPECT_EQ(kodaira_rank(make_wps({1, 1}, 0), 5).rank, 0);
  EXPECT_FALSE(kodaira_rank(make_wps({1, 1}, -1), 2).defined);
  EXPECT_EQ(kodaira_rank(make_wps({1, 1, 1}, 1), 1).rank, 2);
  EXPECT_EQ(kodaira_rank(make_torus(1, 1, {1}), 2).rank, 1);
  EXPECT_EQ(kodaira_rank(make_torus(1, 2, {1}), 2).rank, 1);
  EXPECT_EQ(kodaira_rank(make_torus(2, 1, {1, 1}), 2).rank, 2);
  EXPECT_EQ(kodaira_rank(make_torus(2, 1, {1, 0}), 3).rank, 1);
  EXPECT_THROW(kodaira_rank(make_local(2, {1.0}, {1}), 1), UnsupportedModelError);
}

TEST(Kodaira, GrowthBoundedByRank) {
  // log h0 / log p stays below rank + 0.1 on the tail
  const auto m = make_wps({1, 1, 2}, 1);
  const int rank = kodaira_rank(m, 4).rank;
  for (int p : {200, 400, 800}) {
    const double h = double(weighted_proj_h0({1, 1, 2}, p));
    EXPECT_LE(std::log(h) / std::log(double(p)), rank + 0.1);
  }
}

TEST(Verdicts, Examples) {
  const auto a = moishezon_check(make_wps({1, 2}, 1), 128, 1e-8, 1e-3);
  EXPECT_EQ(a.verdict, Verdict::MoishezonByPositivity);
  EXPECT_NEAR(a.integral, 0.5, 1e-3);
  const auto b = moishezon_check(make_wps({1, 1}, 0), 64, 1e-8, 1e-3);
  EXPECT_EQ(b.verdict, Verdict::Inconclusive);
  EXPECT_TRUE(b.semipositive);
  EXPECT_FALSE(b.positive_somewhere);
  const auto c = moishezon_check(make_wps({1, 1}, 1, 3.0), 256, 1e-8, 1e-3);
  EXPECT_EQ(c.verdict, Verdict::MoishezonBySignature);
  EXPECT_FALSE(c.semipositive);
  EXPECT_GT(c.integral, 1e-3);
  const auto d = moishezon_check(make_torus(2, 1, {1, -1}), 8, 1e-8, 1e-3);
  EXPECT_EQ(d.verdict, Verdict::Inconclusive);
  EXPECT_EQ(to_string(Verdict::MoishezonBySignature), "Moishezon-by-(ii)");
}

TEST(Verdicts, SeedDeterminism) {
  const auto m = make_wps({1, 1}, 1, 3.0);
  const auto a = moishezon_check(m, 64, 1e-8, 1e-3, 5);
  const auto b = moishezon_check(m, 64, 1e-8, 1e-3, 5);
  EXPECT_EQ(a.min_eigenvalue, b.min_eigenvalue);
  EXPECT_EQ(a.max_min_eigenvalue, b.max_min_eigenvalue);
}
