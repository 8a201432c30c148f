// Copyright 2026 The DDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dda/attributes.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dda/error.h"
#include "test_util.h"

namespace dda::attributes {
namespace {

using geo::GeoPoint;
using testing::North;

std::vector<std::uint32_t> Order(const RankingEntry& e) {
  std::vector<std::uint32_t> out;
  for (const auto& r : e) out.push_back(r.point);
  return out;
}

TEST(DensityTest, CollinearPoints) {
  const std::vector<GeoPoint> pts = {North(30, -97, 0), North(30, -97, 1),
                                     North(30, -97, 10)};
  const auto e = RankHardshipDensity(pts);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(Order(e), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_NEAR(e[0].score, 1.0, 1e-9);
  EXPECT_NEAR(e[1].score, 1.0, 1e-9);
  EXPECT_NEAR(e[2].score, 9.0, 1e-9);
}

TEST(DensityTest, DuplicatesScoreZeroAndIsolatedPointIsLast) {
  std::vector<GeoPoint> pts = {North(30, -97, 2), North(30, -97, 2),
                               North(30, -97, 2.5), North(30, -97, 80),
                               North(30, -97, 3)};
  const auto e = RankHardshipDensity(pts);
  EXPECT_EQ(e[0].score, 0.0);
  EXPECT_EQ(e[1].score, 0.0);
  EXPECT_EQ(e.back().point, 3u);
  EXPECT_THROW(RankHardshipDensity(std::vector<GeoPoint>{pts[0]}), Error);
}

TEST(KMeansHardshipTest, IdenticalPointsScoreZero) {
  const std::vector<GeoPoint> pts(6, GeoPoint{30.2, -97.7});
  for (const auto& r : RankHardshipKMeans(pts, 2, Seed(1))) {
    EXPECT_EQ(r.score, 0.0);
  }
}

TEST(KMeansHardshipTest, BlobPointsBeatFarPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(North(30, -97, d(rng)));
  for (int i = 0; i < 10; ++i) pts.push_back(North(30.3, -97.2, d(rng)));
  pts.push_back(North(30, -97, 100));
  pts.push_back(North(30, -97, -100));
  const auto e = RankHardshipKMeans(pts, 2, Seed(2));
  std::set<std::uint32_t> last2 = {e[e.size() - 1].point, e[e.size() - 2].point};
  EXPECT_EQ(last2, (std::set<std::uint32_t>{20, 21}));
}

TEST(RatingRankTest, OrderAndRandomTies) {
  const std::vector<double> v = {5, 1, 3};
  EXPECT_EQ(Order(RankByRating(v, Seed(1))),
            (std::vector<std::uint32_t>{1, 2, 0}));
  const std::vector<double> same(10, 3.0);
  EXPECT_EQ(Order(RankByRating(same, Seed(4))), Order(RankByRating(same, Seed(4))));
  std::set<std::uint32_t> first;
  for (std::uint64_t s = 0; s < 50; ++s) {
    first.insert(RankByRating(same, Seed(s))[0].point);
  }
  EXPECT_GT(first.size(), 5u);
}

AttributeRanking Synthetic(std::size_t n_points) {
  AttributeRanking r;
  r.attribute = "t";
  r.per_user.resize(1);
  for (std::uint32_t i = 0; i < n_points; ++i) {
    r.per_user[0].push_back({i, double(i)});
  }
  return r;
}

TEST(DecilesTest, RemainderRule) {
  const auto p = PartitionDeciles(Synthetic(23), 10, 23);
  std::vector<std::size_t> sizes;
  for (const auto& c : p.chunks) sizes.push_back(c.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 3, 2, 2, 2, 2, 2, 2, 2}));
  const auto q = PartitionDeciles(Synthetic(100), 10, 100);
  for (const auto& c : q.chunks) EXPECT_EQ(c.size(), 10u);
  EXPECT_EQ(q.labels.front(), "1");
  EXPECT_EQ(q.labels.back(), "10");
}

TEST(DecilesTest, DisjointCoverOnCity) {
  const CheckinDataset ds = GenerateCity({.n_users = 50, .n_locations = 300},
                                         Seed(7));
  const auto ranking = RankDatasetDensity(ds, kDefaultMinPoints);
  const auto p = PartitionDeciles(ranking, 10, ds.size());
  std::vector<int> seen(ds.size(), 0);
  for (const auto& c : p.chunks) {
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    for (auto i : c) ++seen[i];
  }
  EXPECT_EQ(p.CoveredPoints(), ds.size());
  for (int s : seen) EXPECT_EQ(s, 1);
  const auto mask = p.Mask(3);
  EXPECT_EQ(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)),
            p.chunks[3].size());
}

TEST(DatasetRankingTest, ExcludesSmallUsers) {
  const CheckinDataset ds = testing::Checkins({{"a", "l1", 30, -97, 9},
                                               {"a", "l2", 30.01, -97, 9},
                                               {"b", "l1", 30, -97, 9},
                                               {"b", "l2", 30.01, -97, 9},
                                               {"b", "l3", 30.02, -97, 9}});
  const auto r = RankDatasetDensity(ds, 3);
  EXPECT_EQ(r.excluded_users, std::vector<std::uint32_t>{0});
  EXPECT_TRUE(r.per_user[0].empty());
  EXPECT_EQ(r.per_user[1].size(), 3u);
  const auto k = RankDatasetKMeans(ds, 2, 3, Seed(1));
  EXPECT_EQ(k.excluded_users, std::vector<std::uint32_t>{0});
}

TEST(TimeIntervalTest, UniformGivesEightThreeHourIntervals) {
  std::array<double, 24> mass;
  mass.fill(5.0);
  const auto iv = BuildTimeIntervals(mass);
  ASSERT_EQ(iv.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(iv[k].start_hour, static_cast<int>(3 * k));
    EXPECT_EQ(iv[k].length(), 3);
    EXPECT_DOUBLE_EQ(iv[k].fraction, 0.125);
    EXPECT_TRUE(iv[k].in_band);
  }
  EXPECT_EQ(iv[0].Label(), "00-03");
  EXPECT_EQ(iv[7].Label(), "21-00");
}

TEST(TimeIntervalTest, AllAtOneHourIsFlagged) {
  std::array<double, 24> mass{};
  mass[9] = 100;
  const auto iv = BuildTimeIntervals(mass);
  int holding = 0;
  for (const auto& t : iv) {
    if (t.Contains(9)) {
      ++holding;
      EXPECT_EQ(t.fraction, 1.0);
      EXPECT_FALSE(t.in_band);
    }
  }
  EXPECT_EQ(holding, 1);
}

TEST(TimeIntervalTest, TilesTheDayAndSumsToOne) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 24> mass;
    for (double& m : mass) m = d(rng);
    const auto iv = BuildTimeIntervals(mass);
    std::vector<int> cover(24, 0);
    double total = 0;
    for (const auto& t : iv) {
      for (int h = 0; h < 24; ++h) cover[h] += t.Contains(h);
      total += t.fraction;
    }
    for (int c : cover) EXPECT_EQ(c, 1);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(TimeIntervalTest, WrapAroundMask) {
  const TimeInterval t{22, 2, 0.1, true};
  EXPECT_EQ(t.length(), 4);
  EXPECT_TRUE(t.Contains(23));
  EXPECT_TRUE(t.Contains(1));
  EXPECT_FALSE(t.Contains(2));
  EXPECT_EQ(t.HourMask(), (1u << 22) | (1u << 23) | 1u | 2u);
}

TEST(TimePartitionTest, PointsMustFitOneInterval) {
  const CheckinDataset ds = testing::Checkins({{"u", "a", 30, -97, 1},
                                               {"u", "b", 30, -97, 4},
                                               {"u", "c", 30, -97, 1},
                                               {"u", "c", 30, -97, 13}});
  const std::vector<TimeInterval> iv = {{0, 12, 0.5, true}, {12, 0, 0.5, true}};
  const auto p = TimePartition(ds, iv);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.chunks[0].size(), 2u);
  EXPECT_EQ(p.chunks[1].size(), 0u);
  EXPECT_EQ(p.labels[0], "00-12");
}

TEST(HourlyMassTest, CountsEachVisitedHour) {
  const CheckinDataset ds = testing::Checkins({{"u", "a", 30, -97, 1},
                                               {"u", "a", 30, -97, 5},
                                               {"u", "a", 30, -97, 5},
                                               {"v", "a", 30, -97, 5}});
  const auto m = HourlyMass(ds);
  EXPECT_EQ(m[1], 1.0);
  EXPECT_EQ(m[5], 2.0);
  EXPECT_EQ(std::accumulate(m.begin(), m.end(), 0.0), 3.0);
}

}  // namespace
}  // namespace dda::attributes
