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

#include "dda/recommend.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dda/error.h"
#include "test_util.h"

namespace dda::recommend {
namespace {

using testing::Checkins;

TEST(CosineTest, Examples) {
  const std::vector<std::uint32_t> a = {1, 2};
  const std::vector<std::uint32_t> b = {2, 3};
  const std::vector<std::uint32_t> c = {4, 5};
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, a), 1.0);
  EXPECT_EQ(CosineSimilarity(a, c), 0.0);
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, b), 0.5);
  EXPECT_EQ(CosineSimilarity({}, a), 0.0);
}

// u visits {a, b}; v1 visits {a, i}; v2 visits {c}.
CheckinDataset Toy() {
  return Checkins({{"u", "a", 30, -97, 9},
                   {"u", "b", 30, -97, 9},
                   {"v1", "a", 30, -97, 9},
                   {"v1", "i", 30, -97, 9},
                   {"v2", "c", 30, -97, 9},
                   {"v2", "x", 30, -97, 9}});
}

TEST(LocationScoreTest, ToyInstance) {
  const CheckinDataset ds = Toy();
  const SimilarityContext ctx(ds);
  const auto u = *ds.catalog().FindUser("u");
  const auto i = *ds.catalog().FindItem("i");
  const double w1 = 1.0 / (std::sqrt(2.0) * std::sqrt(2.0));
  const double w2 = 0.0;
  EXPECT_EQ(ctx.LocationScore(u, i), w1 / (w1 + w2));
  EXPECT_EQ(ctx.LocationScore(u, *ds.catalog().FindItem("c")), 0.0);
  EXPECT_EQ(ctx.TopN(u, 1), std::vector<std::uint32_t>{i});
}

TEST(LocationScoreTest, EveryOtherUserVisited) {
  const CheckinDataset ds = Checkins({{"u", "a", 30, -97, 9},
                                      {"v", "a", 30, -97, 9},
                                      {"v", "i", 30, -97, 9},
                                      {"w", "a", 30, -97, 9},
                                      {"w", "i", 30, -97, 9}});
  const SimilarityContext ctx(ds);
  EXPECT_EQ(ctx.LocationScore(*ds.catalog().FindUser("u"),
                              *ds.catalog().FindItem("i")),
            1.0);
}

TEST(TopNTest, TiesBreakByLowerIndexAndFillWithZeros) {
  // v visits i1 and i2 equally; z1, z2 are nobody's and score 0.
  const CheckinDataset ds = Checkins({{"u", "a", 30, -97, 9},
                                      {"v", "a", 30, -97, 9},
                                      {"v", "i1", 30, -97, 9},
                                      {"v", "i2", 30, -97, 9},
                                      {"w", "z1", 30, -97, 9},
                                      {"w", "z2", 30, -97, 9}});
  const SimilarityContext ctx(ds);
  const auto u = *ds.catalog().FindUser("u");
  const auto& cat = ds.catalog();
  const auto top = ctx.TopN(u, 10);
  const std::vector<std::uint32_t> expected = {
      *cat.FindItem("i1"), *cat.FindItem("i2"), *cat.FindItem("z1"),
      *cat.FindItem("z2")};
  EXPECT_EQ(top, expected);
  EXPECT_EQ(ctx.TopN(u, 1), std::vector<std::uint32_t>{*cat.FindItem("i1")});
}

TEST(TopNTest, NeverRecommendsVisited) {
  const CheckinDataset ds = GenerateCity({.n_users = 40, .n_locations = 150},
                                         Seed(3));
  const SimilarityContext ctx(ds);
  for (std::uint32_t u = 0; u < 40; ++u) {
    const auto visited = ctx.user_vector(u);
    for (auto loc : ctx.TopN(u, 10)) {
      EXPECT_FALSE(std::binary_search(visited.begin(), visited.end(), loc));
    }
  }
}

TEST(PredictTest, HandBuiltModel) {
  MFModel m(1, 1, 2);
  m.global_mean = 3.0;
  m.user_bias[0] = 0.5;
  m.item_bias[0] = -0.2;
  m.user_factors = {0.5, 1.0};
  m.item_factors = {0.2, 0.0};
  m.user_known = {1};
  m.item_known = {1};
  EXPECT_NEAR(m.Predict(0, 0), 3.4, 1e-12);
}

TEST(PredictTest, UnknownAndZeroModel) {
  MFModel m(2, 2, 3);
  m.global_mean = 3.7;
  EXPECT_EQ(m.Predict(0, 1), 3.7);
  EXPECT_EQ(m.Predict(5, 9), 3.7);
}

RatingDataset Constant(double value) {
  auto catalog = std::make_shared<Catalog>();
  std::vector<RatingPoint> pts;
  for (int u = 0; u < 20; ++u) {
    const auto uid = catalog->InternUser("u" + std::to_string(u));
    for (int i = 0; i < 10; ++i) {
      pts.push_back({uid, catalog->InternItem("i" + std::to_string(i)), value, 0});
    }
  }
  return RatingDataset(catalog, pts);
}

TEST(TrainMfTest, ConstantData) {
  const RatingDataset ds = Constant(3.0);
  TrainTrace trace;
  const MFModel m = TrainMf(
      ds, 2, {.learning_rate = 0.01, .regularization = 0.0, .epochs = 300},
      Seed(1), &trace);
  EXPECT_DOUBLE_EQ(m.global_mean, 3.0);
  for (double b : m.user_bias) EXPECT_NEAR(b, 0.0, 0.01);
  for (double b : m.item_bias) EXPECT_NEAR(b, 0.0, 0.01);
  EXPECT_LT(trace.rmse.back(), 1e-2);
}

TEST(TrainMfTest, RankOneFit) {
  const RatingDataset ds = GenerateSynthetic(50, 50, 1, 2000, Seed(2));
  TrainTrace trace;
  TrainMf(ds, 1, {.learning_rate = 0.01, .regularization = 0.0, .epochs = 200},
          Seed(3), &trace);
  EXPECT_LT(trace.rmse.back(), 0.05);
}

TEST(TrainMfTest, ObjectiveDecreasesAndIsDeterministic) {
  const RatingDataset ds = GenerateSynthetic(60, 40, 3, 1200, Seed(4));
  TrainTrace t1;
  TrainTrace t2;
  const MFModel a = TrainMf(ds, 3, {}, Seed(5), &t1);
  const MFModel b = TrainMf(ds, 3, {}, Seed(5), &t2);
  EXPECT_EQ(a.user_factors, b.user_factors);
  EXPECT_EQ(t1.objective, t2.objective);
  EXPECT_LT(t1.objective.back(), t1.objective.front());
  EXPECT_NEAR(t1.objective.back(), Objective(a, ds, SgdConfig{}.regularization),
              1e-9 * t1.objective.back());
}

TEST(TrainMfTest, DivergenceIsReported) {
  const RatingDataset ds = GenerateSynthetic(30, 30, 5, 600, Seed(6));
  try {
    TrainMf(ds, 5, {.learning_rate = 5.0}, Seed(1));
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRuntime);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  const RatingDataset ds = GenerateSynthetic(15, 12, 4, 100, Seed(7));
  MFModel m = TrainMf(ds, 4, {.epochs = 2}, Seed(8));
  std::mt19937_64 rng(9);
  const double reg = 0.1;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const RatingPoint& r = ds[UniformIndex(rng, ds.size())];
    const RatingGradient g = RatingLossGradient(m, r, reg);
    auto check = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = RatingLoss(m, r, reg);
      param = saved - h;
      const double down = RatingLoss(m, r, reg);
      param = saved;
      const double numeric = (up - down) / (2 * h);
      EXPECT_LE(std::abs(analytic - numeric) /
                    std::max({std::abs(analytic), std::abs(numeric), 1e-6}),
                1e-4);
    };
    check(m.user_bias[r.user], g.user_bias);
    check(m.item_bias[r.item], g.item_bias);
    const std::size_t f = UniformIndex(rng, m.n_factors);
    check(m.user_row(r.user)[f], g.user_factors[f]);
    check(m.item_row(r.item)[f], g.item_factors[f]);
  }
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  const RatingDataset ds = GenerateSynthetic(20, 20, 3, 200, Seed(10));
  const MFModel m = TrainMf(ds, 3, {.epochs = 3}, Seed(11));
  std::stringstream buf;
  SaveModel(m, buf);
  const MFModel back = LoadModel(buf);
  EXPECT_EQ(back.global_mean, m.global_mean);
  EXPECT_EQ(back.user_factors, m.user_factors);
  EXPECT_EQ(back.item_bias, m.item_bias);
  EXPECT_EQ(back.user_known, m.user_known);
  std::istringstream bad("not a model");
  EXPECT_THROW(LoadModel(bad), Error);
}

}  // namespace
}  // namespace dda::recommend
