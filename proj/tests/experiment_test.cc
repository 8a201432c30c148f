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

#include "dda/experiment.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "dda/error.h"
#include "test_util.h"

namespace dda::experiment {
namespace {

TEST(NamesTest, ParseAndList) {
  EXPECT_EQ(ParseAttribute("density"), AttributeKind::kDensity);
  EXPECT_EQ(ParseMetric("rmse"), MetricKind::kRmse);
  EXPECT_EQ(ParseRecommender("mf"), RecommenderKind::kMf);
  EXPECT_EQ(Name(AttributeKind::kTime), "time");
  try {
    ParseAttribute("colour");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    const std::string msg = e.what();
    for (const char* name : {"kmeans", "density", "time", "rating"}) {
      EXPECT_NE(msg.find(name), std::string::npos) << msg;
    }
  }
}

TEST(PartitionTest, AttributeDataMismatch) {
  const RatingDataset r = GenerateSynthetic(10, 10, 2, 50, Seed(1));
  EXPECT_THROW(BuildPartition(r, {.kind = AttributeKind::kDensity}, Seed(1)),
               Error);
  const CheckinDataset c = GenerateCity({.n_users = 20, .n_locations = 100}, Seed(1));
  EXPECT_THROW(BuildPartition(c, {.kind = AttributeKind::kRating}, Seed(1)),
               Error);
  std::vector<attributes::TimeInterval> iv;
  const auto p = BuildPartition(c, {.kind = AttributeKind::kTime}, Seed(1), &iv);
  EXPECT_EQ(p.size(), iv.size());
  EXPECT_FALSE(iv.empty());
}

TEST(EvaluateTopNTest, CountsColdUsers) {
  const CheckinDataset ds = GenerateCity({.n_users = 40, .n_locations = 200}, Seed(2));
  const auto split = HoldoutSplit(ds, 0.2, Seed(3));
  // Drop one user's training data entirely.
  std::vector<bool> drop(split.train.size(), false);
  for (auto i : split.train.UserPoints(0)) drop[i] = true;
  const auto train = split.train.Without(drop);
  const auto e = EvaluateTopN(train, split.test, 5);
  EXPECT_EQ(e.cold_users, 1u);
  EXPECT_EQ(e.precision.n_users, split.test.ActiveUsers().size());
  EXPECT_GT(e.precision.value, 0.0);
  EXPECT_GT(e.recall.value, 0.0);
}

TEST(ScorerTest, MfScorerUsesCache) {
  const RatingDataset ds = GenerateSynthetic(40, 30, 3, 600, Seed(4));
  const auto split = HoldoutSplit(ds, 0.2, Seed(5));
  const auto dir = std::filesystem::temp_directory_path() / "dda-cache-test";
  std::filesystem::remove_all(dir);
  ModelCache cache(dir);
  RecommenderConfig cfg{.kind = RecommenderKind::kMf,
                        .metric = MetricKind::kRmse,
                        .n_factors = 3,
                        .sgd = {.epochs = 5}};
  const auto scorer = MakeScorer(split.test, cfg, Seed(6), &cache);
  const double a = scorer.score(split.train);
  const double b = scorer.score(split.train);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_EQ(cache.hits(), 1u);
  const auto uncached = MakeScorer(split.test, cfg, Seed(6));
  EXPECT_EQ(uncached.score(split.train), a);
  EXPECT_FALSE(uncached.metric.higher_is_better);
  std::filesystem::remove_all(dir);
}

TEST(ScorerTest, RejectsMismatchedKinds) {
  const CheckinDataset c = GenerateCity({.n_users = 20, .n_locations = 100}, Seed(1));
  EXPECT_THROW(MakeScorer(c, {.metric = MetricKind::kRmse}), Error);
  const RatingDataset r = GenerateSynthetic(10, 10, 2, 50, Seed(1));
  EXPECT_THROW(MakeScorer(r, {}, Seed(1)), Error);
}

}  // namespace
}  // namespace dda::experiment
