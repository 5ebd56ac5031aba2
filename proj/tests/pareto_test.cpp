#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "morphoforge/pareto.hpp"
#include "support/oracles.hpp"

namespace morphoforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Dominates, Cases) {
  EXPECT_TRUE(dominates({1.0, 3.5}, {2.0, 4.0}));
  EXPECT_FALSE(dominates({2.0, 4.0}, {1.0, 3.5}));
  EXPECT_FALSE(dominates({1.0, 4.0}, {2.0, 3.5}));
  EXPECT_FALSE(dominates({2.0, 3.5}, {1.0, 4.0}));
  EXPECT_FALSE(dominates({1.0, 3.5}, {1.0, 3.5}));
  EXPECT_TRUE(dominates({1.0, 3.5}, {1.0, 3.6}));
}

TEST(NonDominatedSort, WorkedExample) {
  const std::vector<ObjectivePair> pts = {{1, 5}, {2, 3}, {4, 1}, {3, 4}, {5, 5}};
  const auto fronts = non_dominated_sort(pts);
  ASSERT_EQ(fronts.size(), 3u);
  EXPECT_EQ(fronts[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(fronts[1], (std::vector<std::size_t>{3}));
  EXPECT_EQ(fronts[2], (std::vector<std::size_t>{4}));
}

TEST(NonDominatedSort, DegenerateInputs) {
  const std::vector<ObjectivePair> same(7, {1.0, 1.0});
  const auto one = non_dominated_sort(same);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 7u);

  const std::vector<ObjectivePair> chain = {{3, 3}, {1, 1}, {2, 2}};
  const auto fronts = non_dominated_sort(chain);
  ASSERT_EQ(fronts.size(), 3u);
  EXPECT_EQ(fronts[0], std::vector<std::size_t>{1});
  EXPECT_EQ(fronts[1], std::vector<std::size_t>{2});
  EXPECT_EQ(fronts[2], std::vector<std::size_t>{0});

  EXPECT_TRUE(non_dominated_sort(std::vector<ObjectivePair>{}).empty());
}

TEST(NonDominatedSort, AgreesWithBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    std::vector<ObjectivePair> pts(n);
    // Alternate continuous and coarse integer objectives to exercise ties.
    for (auto& p : pts) {
      if (trial % 2 == 0) {
        p = {std::uniform_real_distribution<double>(0, 1)(rng), std::uniform_real_distribution<double>(0, 1)(rng)};
      } else {
        p = {double(std::uniform_int_distribution<int>(0, 6)(rng)), double(std::uniform_int_distribution<int>(0, 6)(rng))};
      }
    }
    const auto ranks = ranks_from_fronts(non_dominated_sort(pts), n);
    EXPECT_EQ(ranks, testing::brute_force_ranks(pts)) << "trial " << trial;
  }
}

TEST(CrowdingDistance, SmallFrontsAreBoundaries) {
  EXPECT_EQ(crowding_distance(std::vector<ObjectivePair>{{1, 1}}), std::vector<double>{kInf});
  EXPECT_EQ(crowding_distance(std::vector<ObjectivePair>{{1, 2}, {2, 1}}), (std::vector<double>{kInf, kInf}));
}

TEST(CrowdingDistance, MiddlePointOfThree) {
  const auto cd = crowding_distance(std::vector<ObjectivePair>{{0, 2}, {1, 1}, {2, 0}});
  EXPECT_EQ(cd[0], kInf);
  EXPECT_DOUBLE_EQ(cd[1], 2.0);
  EXPECT_EQ(cd[2], kInf);
}

TEST(CrowdingDistance, NormalizedGapsAndDegenerateRange) {
  // Objective 1 spread 4, objective 2 spread 0.
  const auto cd = crowding_distance(std::vector<ObjectivePair>{{0, 1}, {1, 1}, {3, 1}, {4, 1}});
  EXPECT_EQ(cd[0], kInf);
  EXPECT_DOUBLE_EQ(cd[1], 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(cd[2], 3.0 / 4.0);
  EXPECT_EQ(cd[3], kInf);
}

TEST(Hypervolume, Rectangles) {
  const ObjectivePair ref{4, 4};
  EXPECT_DOUBLE_EQ(hypervolume_2d(std::vector<ObjectivePair>{{1, 1}}, ref), 9.0);
  // Staircase: (1,3) (2,2) (3,1) -> 3 + 2 + 1 = 6 cells.
  EXPECT_DOUBLE_EQ(hypervolume_2d(std::vector<ObjectivePair>{{3, 1}, {1, 3}, {2, 2}}, ref), 6.0);
  // Dominated and out-of-box points change nothing.
  EXPECT_DOUBLE_EQ(hypervolume_2d(std::vector<ObjectivePair>{{3, 1}, {1, 3}, {2, 2}, {3, 3}, {5, 0}}, ref), 6.0);
  EXPECT_DOUBLE_EQ(hypervolume_2d(std::vector<ObjectivePair>{}, ref), 0.0);
}

TEST(Hypervolume, MatchesGridCount) {
  // Monte-Carlo-free oracle: count dominated cells of a fine lattice.
  std::mt19937_64 rng(42);
  std::vector<ObjectivePair> pts;
  for (int i = 0; i < 30; ++i) {
    pts.push_back({double(std::uniform_int_distribution<int>(0, 99)(rng)), double(std::uniform_int_distribution<int>(0, 99)(rng))});
  }
  long cells = 0;
  for (int x = 0; x < 100; ++x) {
    for (int y = 0; y < 100; ++y) {
      for (const auto& p : pts) {
        if (p.task <= x && p.design <= y) {
          ++cells;
          break;
        }
      }
    }
  }
  EXPECT_DOUBLE_EQ(hypervolume_2d(pts, {100, 100}), double(cells));
}

}  // namespace
}  // namespace morphoforge
