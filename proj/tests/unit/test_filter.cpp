#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "streamelas/filter.hpp"

using namespace streamelas;
using filter::FilterConfig;
using sparse::SupportPoint;

TEST(Consistency, IsolatedPointRemoved) {
  const std::vector<SupportPoint> pts = {{50, 50, 10}};
  EXPECT_TRUE(filter::consistency_filter(pts, {}).empty());
}

TEST(Consistency, ClusterKeptAndOutlierRemoved) {
  std::vector<SupportPoint> pts;
  for (int v = 20; v < 26; ++v) {
    for (int u = 20; u < 26; ++u) pts.push_back({u, v, u == 23 && v == 23 ? 40 : 10});
  }
  const auto kept = filter::consistency_filter(pts, {});
  EXPECT_EQ(kept.size(), pts.size() - 1);
  for (const auto& p : kept) EXPECT_EQ(p.d, 10);
  EXPECT_EQ(kept, oracle::consistency(pts, 10, 5, 2));
}

TEST(Consistency, MatchesPairwiseOracleOnRandomStreams) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = oracle::random_stream(rng, 60, 45, 0.05 + 0.01 * (trial % 10), 30);
    FilterConfig cfg;
    cfg.consistency_radius = 1 + trial % 8;
    cfg.consistency_tolerance = trial % 6;
    cfg.min_consistent_neighbors = trial % 4;
    EXPECT_EQ(filter::consistency_filter(pts, cfg),
              oracle::consistency(pts, cfg.consistency_radius, cfg.consistency_tolerance,
                                  cfg.min_consistent_neighbors));
  }
}

TEST(Redundancy, RunOfEqualPointsKeepsEverySixth) {
  std::vector<SupportPoint> pts;
  for (int u = 0; u < 18; ++u) pts.push_back({u, 3, 12});
  const auto kept = filter::redundancy_filter_backwards(pts, {});
  const std::vector<SupportPoint> expected = {{0, 3, 12}, {6, 3, 12}, {12, 3, 12}};
  EXPECT_EQ(kept, expected);
}

TEST(Redundancy, DistinctDisparitiesBothKept) {
  const std::vector<SupportPoint> pts = {{4, 4, 10}, {5, 4, 12}};
  EXPECT_EQ(filter::redundancy_filter_backwards(pts, {}), pts);
}

TEST(Redundancy, ColumnNeighboursAreRedundant) {
  const std::vector<SupportPoint> pts = {{4, 4, 10}, {4, 9, 11}, {4, 10, 11}};
  const std::vector<SupportPoint> expected = {{4, 4, 10}, {4, 10, 11}};
  EXPECT_EQ(filter::redundancy_filter_backwards(pts, {}), expected);
}

TEST(Redundancy, MatchesQuadraticOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = oracle::random_stream(rng, 50, 40, 0.1 + 0.02 * (trial % 20), 8);
    FilterConfig cfg;
    cfg.redundancy_distance = trial % 9;
    cfg.redundancy_tolerance = trial % 3;
    EXPECT_EQ(filter::redundancy_filter_backwards(pts, cfg),
              oracle::redundancy_backwards(pts, cfg.redundancy_distance, cfg.redundancy_tolerance));
  }
}

TEST(Redundancy, Idempotent) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::random_stream(rng, 40, 30, 0.3, 6);
    const auto once = filter::redundancy_filter_backwards(pts, {});
    EXPECT_EQ(filter::redundancy_filter_backwards(once, {}), once);
  }
}

TEST(Redundancy, PrefixOfInputGivesPrefixOfOutput) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::random_stream(rng, 40, 30, 0.3, 6);
    const auto full = filter::redundancy_filter_backwards(pts, {});
    for (std::size_t n = 0; n <= pts.size(); n += 7) {
      const std::vector<SupportPoint> prefix(pts.begin(), pts.begin() + n);
      const auto part = filter::redundancy_filter_backwards(prefix, {});
      ASSERT_LE(part.size(), full.size());
      ASSERT_TRUE(std::equal(part.begin(), part.end(), full.begin()));
      // Nothing from the prefix is missing from its filtered version.
      const auto in_full = std::count_if(full.begin(), full.end(), [&](const SupportPoint& p) {
        return std::find(prefix.begin(), prefix.end(), p) != prefix.end();
      });
      ASSERT_EQ(static_cast<std::size_t>(in_full), part.size());
    }
  }
}

TEST(Redundancy, BidirectionalRuleIsNotStreamable) {
  const std::vector<SupportPoint> pts = {{0, 0, 5}, {3, 0, 5}};
  const auto full = oracle::redundancy_bidirectional(pts, 5, 1);
  const auto prefix = oracle::redundancy_bidirectional({pts[0]}, 5, 1);
  ASSERT_EQ(prefix.size(), 1u);
  ASSERT_EQ(full.size(), 1u);
  EXPECT_NE(full.front(), prefix.front());
}

TEST(FilterConfig, NegativeValuesRejected) {
  FilterConfig cfg;
  cfg.redundancy_distance = -1;
  EXPECT_THROW(cfg.validate(), Error);
}
