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

#include "dda/dataset.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "dda/error.h"
#include "test_util.h"

namespace dda {
namespace {

constexpr char kHeader[] = "user_id,location_id,lat,lon,local_time\n";

TEST(ParseLocalTimeTest, Formats) {
  auto t = ParseLocalTime("2010-10-19T23:55:27");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->hour, 23);
  EXPECT_EQ(t->second, 27);
  t = ParseLocalTime("2010-10-19 07:05");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->hour, 7);
  EXPECT_FALSE(ParseLocalTime("2010-10-19T24:00"));
  EXPECT_FALSE(ParseLocalTime("2010-13-01T10:00"));
  EXPECT_FALSE(ParseLocalTime("yesterday"));
  EXPECT_EQ(FormatLocalTime(*ParseLocalTime("2010-01-02T03:04:05")),
            "2010-01-02T03:04:05");
}

TEST(LoadCheckinsTest, ThreeRows) {
  std::istringstream in(std::string(kHeader) +
                        "u1,l1,30.26,-97.74,2010-10-19T09:10:00\n"
                        "u1,l2,30.27,-97.75,2010-10-19T10:10:00\n"
                        "u2,l1,30.26,-97.74,2010-10-20T22:00:00\n");
  const CheckinDataset ds = ParseCheckins(in, "mem");
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.num_users(), 2u);
  EXPECT_EQ(ds.num_items(), 2u);
  const auto u1 = *ds.catalog().FindUser("u1");
  const auto l1 = *ds.catalog().FindItem("l1");
  EXPECT_EQ(ds.UserPoints(u1).size(), 2u);
  EXPECT_EQ(ds.ItemPoints(l1).size(), 2u);
  EXPECT_TRUE(ds.catalog().has_positions());
  EXPECT_DOUBLE_EQ(ds.catalog().position(l1).lat, 30.26);
}

TEST(LoadCheckinsTest, RepeatedVisitsCollapseIntoHourMask) {
  std::istringstream in(std::string(kHeader) +
                        "u1,l1,30.26,-97.74,2010-10-19T09:10:00\n"
                        "u1,l1,30.26,-97.74,2010-10-20T09:50:00\n"
                        "u1,l1,30.26,-97.74,2010-10-21T21:00:00\n");
  const CheckinDataset ds = ParseCheckins(in, "mem");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].hour_mask, (1u << 9) | (1u << 21));
}

TEST(LoadCheckinsTest, LatitudeOutOfBoundsNamesRow) {
  std::istringstream in(std::string(kHeader) +
                        "u1,l1,30.26,-97.74,2010-10-19T09:10:00\n"
                        "u1,l2,91.0,-97.74,2010-10-19T09:10:00\n");
  try {
    ParseCheckins(in, "checkins.csv");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDataset);
    EXPECT_NE(std::string(e.what()).find("checkins.csv:3"), std::string::npos)
        << e.what();
  }
}

TEST(LoadCheckinsTest, Malformed) {
  for (const char* body :
       {"u1,l1,30.2,-97.7\n", "u1,l1,abc,-97.7,2010-10-19T09:10:00\n",
        ",l1,30.2,-97.7,2010-10-19T09:10:00\n",
        "u1,l1,30.2,-97.7,noon\n"}) {
    std::istringstream in(std::string(kHeader) + body);
    EXPECT_THROW(ParseCheckins(in, "mem"), Error) << body;
  }
  std::istringstream no_header("u1,l1,30.2,-97.7,2010-10-19T09:10:00\n");
  EXPECT_THROW(ParseCheckins(no_header, "mem"), Error);
  EXPECT_THROW(LoadCheckins("/nonexistent/file.csv"), Error);
}

TEST(LoadCheckinsTest, RoundTripThroughCsv) {
  const CheckinDataset ds = GenerateCity({.n_users = 30, .n_locations = 200},
                                         Seed(5));
  std::stringstream buf;
  WriteCheckinsCsv(ds, buf);
  const CheckinDataset back = ParseCheckins(buf, "roundtrip");
  EXPECT_EQ(back.size(), ds.size());
  EXPECT_EQ(ContentHash(back), ContentHash(ds));
}

TEST(LoadMovieLensTest, SingleRow) {
  std::istringstream in("1::1193::5::978300760\n");
  const RatingDataset ds = ParseMovieLens(in, "ratings.dat");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.catalog().user_id(ds[0].user), "1");
  EXPECT_EQ(ds.catalog().item_id(ds[0].item), "1193");
  EXPECT_EQ(ds[0].value, 5.0);
  EXPECT_EQ(ds[0].timestamp, 978300760);
}

TEST(LoadMovieLensTest, EmptyFile) {
  std::istringstream in("");
  EXPECT_TRUE(ParseMovieLens(in, "empty").empty());
}

TEST(LoadMovieLensTest, Errors) {
  std::istringstream stars("1::1193::6::978300760\n");
  EXPECT_THROW(ParseMovieLens(stars, "x"), Error);
  std::istringstream fields("1::1193::5\n");
  EXPECT_THROW(ParseMovieLens(fields, "x"), Error);
}

TEST(RatingsCsvTest, RoundTripIsExact) {
  const RatingDataset ds = GenerateSynthetic(20, 15, 3, 100, Seed(1));
  std::stringstream buf;
  WriteRatingsCsv(ds, buf);
  const RatingDataset back = ParseRatingsCsv(buf, "mem");
  ASSERT_EQ(back.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(back[i].value, ds[i].value);
  }
}

RatingDataset PerUserCounts(const std::vector<int>& counts) {
  auto catalog = std::make_shared<Catalog>();
  std::vector<RatingPoint> pts;
  for (std::size_t u = 0; u < counts.size(); ++u) {
    const auto uid = catalog->InternUser("u" + std::to_string(u));
    for (int k = 0; k < counts[u]; ++k) {
      const auto item = catalog->InternItem("i" + std::to_string(k));
      pts.push_back({uid, item, double(k % 5 + 1), 0});
    }
  }
  return RatingDataset(catalog, pts);
}

TEST(HoldoutSplitTest, PerUserFloor) {
  const RatingDataset ds = PerUserCounts({10, 1, 7});
  const auto split = HoldoutSplit(ds, 0.2, Seed(3));
  EXPECT_EQ(split.test.UserPoints(0).size(), 2u);
  EXPECT_EQ(split.train.UserPoints(0).size(), 8u);
  EXPECT_EQ(split.test.UserPoints(1).size(), 0u);
  EXPECT_EQ(split.train.UserPoints(1).size(), 1u);
  EXPECT_EQ(split.test.UserPoints(2).size(), 1u);
  EXPECT_EQ(split.train.size() + split.test.size(), ds.size());
  EXPECT_THROW(HoldoutSplit(ds, 0.0, Seed(1)), Error);
  EXPECT_THROW(HoldoutSplit(ds, 1.0, Seed(1)), Error);
}

TEST(HoldoutSplitTest, DisjointAndDeterministic) {
  const RatingDataset ds = GenerateSynthetic(40, 30, 2, 500, Seed(2));
  const auto a = HoldoutSplit(ds, 0.25, Seed(9));
  const auto b = HoldoutSplit(ds, 0.25, Seed(9));
  EXPECT_EQ(ContentHash(a.test), ContentHash(b.test));
  std::set<std::pair<std::uint32_t, std::uint32_t>> train;
  for (const auto& p : a.train.points()) train.insert({p.user, p.item});
  for (const auto& p : a.test.points()) {
    EXPECT_FALSE(train.count({p.user, p.item}));
  }
}

TEST(HalfSplitTest, Sizes) {
  for (int n : {4, 5}) {
    const RatingDataset ds = PerUserCounts(std::vector<int>(n, 3));
    const auto [a, b] = HalfSplit(ds, Seed(1));
    const auto na = a.ActiveUsers().size();
    const auto nb = b.ActiveUsers().size();
    EXPECT_EQ(na + nb, static_cast<std::size_t>(n));
    EXPECT_LE(std::max(na, nb) - std::min(na, nb), 1u);
    EXPECT_EQ(a.size() + b.size(), ds.size());
    const auto [a2, b2] = HalfSplit(ds, Seed(1));
    EXPECT_EQ(a2.ActiveUsers(), a.ActiveUsers());
  }
}

TEST(SplitUsersTest, DisjointCover) {
  const RatingDataset ds = PerUserCounts(std::vector<int>(23, 4));
  const auto groups = SplitUsers(ds, 4, Seed(2));
  ASSERT_EQ(groups.size(), 4u);
  std::set<std::uint32_t> seen;
  for (const auto& g : groups) {
    const auto users = g.ActiveUsers();
    EXPECT_GE(users.size(), 5u);
    EXPECT_LE(users.size(), 6u);
    for (auto u : users) EXPECT_TRUE(seen.insert(u).second);
  }
  EXPECT_EQ(seen.size(), 23u);
}

TEST(AssignFoldsTest, BalancedPerUser) {
  const RatingDataset ds = PerUserCounts({10, 7, 3});
  const auto folds = AssignFolds(ds, 5, Seed(4));
  ASSERT_EQ(folds.size(), ds.size());
  for (std::uint32_t u = 0; u < 3; ++u) {
    std::vector<int> count(5, 0);
    for (auto i : ds.UserPoints(u)) ++count[folds[i]];
    const auto [lo, hi] = std::minmax_element(count.begin(), count.end());
    EXPECT_LE(*hi - *lo, 1);
  }
  EXPECT_EQ(AssignFolds(ds, 5, Seed(4)), folds);
}

TEST(GenerateSyntheticTest, FullRankOneMatrixIsSingular) {
  const RatingDataset ds = GenerateSynthetic(2, 2, 1, 4, Seed(8));
  ASSERT_EQ(ds.size(), 4u);
  Eigen::Matrix2d m;
  for (const auto& r : ds.points()) m(r.user, r.item) = r.value;
  EXPECT_NEAR(m.determinant(), 0.0, 1e-12);
}

TEST(GenerateSyntheticTest, RankEqualsFactors) {
  const RatingDataset ds = GenerateSynthetic(30, 25, 4, 750, Seed(3));
  Eigen::MatrixXd m(30, 25);
  for (const auto& r : ds.points()) m(r.user, r.item) = r.value;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  EXPECT_EQ(lu.rank(), 4);
}

TEST(GenerateSyntheticTest, DistinctCellsAndCount) {
  const RatingDataset ds = GenerateSynthetic(50, 40, 3, 1234, Seed(4));
  EXPECT_EQ(ds.size(), 1234u);
  std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
  for (const auto& r : ds.points()) cells.insert({r.user, r.item});
  EXPECT_EQ(cells.size(), 1234u);
  EXPECT_THROW(GenerateSynthetic(2, 2, 1, 5, Seed(1)), Error);
}

TEST(GenerateSyntheticTest, VarianceMatchesMonteCarloOracle) {
  constexpr std::size_t kFactors = 10;
  // Oracle: 10^6 independent sums of kFactors products of standard normals.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n01;
  double s = 0;
  double ss = 0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    double x = 0;
    for (std::size_t f = 0; f < kFactors; ++f) x += n01(rng) * n01(rng);
    s += x;
    ss += x * x;
  }
  const double oracle = ss / kDraws - (s / kDraws) * (s / kDraws);
  EXPECT_NEAR(oracle, double(kFactors), 0.05 * kFactors);

  const RatingDataset ds = GenerateSynthetic(2000, 1000, kFactors, 1000000, Seed(5));
  s = 0;
  ss = 0;
  for (const auto& r : ds.points()) {
    s += r.value;
    ss += r.value * r.value;
  }
  const double n = double(ds.size());
  const double var = ss / n - (s / n) * (s / n);
  EXPECT_NEAR(var, oracle, 0.06 * oracle);
}

TEST(GenerateCityTest, ShapeAndDeterminism) {
  const CityParams params{.n_users = 60, .n_locations = 300};
  const CheckinDataset a = GenerateCity(params, Seed(1));
  const CheckinDataset b = GenerateCity(params, Seed(1));
  EXPECT_EQ(ContentHash(a), ContentHash(b));
  EXPECT_EQ(a.ActiveUsers().size(), 60u);
  EXPECT_TRUE(a.catalog().has_positions());
  for (std::uint32_t u = 0; u < 60; ++u) {
    EXPECT_GE(a.UserPoints(u).size(), params.min_points);
    EXPECT_LE(a.UserPoints(u).size(), params.max_points);
  }
  for (const auto& p : a.points()) EXPECT_NE(p.hour_mask, 0u);
  EXPECT_NE(ContentHash(GenerateCity(params, Seed(2))), ContentHash(a));
}

}  // namespace
}  // namespace dda
