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

#ifndef DDA_EXPERIMENT_H_
#define DDA_EXPERIMENT_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dda/attributes.h"
#include "dda/dataset.h"
#include "dda/diffscan.h"
#include "dda/metrics.h"
#include "dda/recommend.h"
#include "dda/seed.h"

namespace dda::experiment {

enum class AttributeKind { kKMeans, kDensity, kTime, kRating };
enum class RecommenderKind { kCosine, kMf };
enum class MetricKind { kPrecision, kRecall, kRmse, kMae };

std::string_view Name(AttributeKind kind);
std::string_view Name(RecommenderKind kind);
std::string_view Name(MetricKind kind);

// Throw InvalidArgument listing the registered names on a miss.
AttributeKind ParseAttribute(std::string_view name);
RecommenderKind ParseRecommender(std::string_view name);
MetricKind ParseMetric(std::string_view name);

struct AttributeConfig {
  AttributeKind kind = AttributeKind::kDensity;
  std::size_t chunks = 10;
  std::size_t kmeans_k = 2;
  std::size_t min_points = attributes::kDefaultMinPoints;
  double interval_min_frac = 0.10;
  double interval_max_frac = 0.15;
};

struct RecommenderConfig {
  RecommenderKind kind = RecommenderKind::kCosine;
  MetricKind metric = MetricKind::kPrecision;
  std::size_t top_n = 5;
  std::size_t n_factors = 20;
  recommend::SgdConfig sgd;
  // Clamp predictions to [clamp_min, clamp_max] before scoring.
  bool clamp = false;
  double clamp_min = 1.0;
  double clamp_max = 5.0;
};

// Ranks and chunks a checkin training set. For the time attribute the
// intervals are built from `train` unless `fixed_intervals` is given; the
// intervals used are written to `intervals_out` when non-null.
attributes::ChunkPartition BuildPartition(
    const CheckinDataset& train, const AttributeConfig& config, Seed seed,
    std::vector<attributes::TimeInterval>* intervals_out = nullptr,
    const std::vector<attributes::TimeInterval>* fixed_intervals = nullptr);

// Only the rating attribute applies to rating data.
attributes::ChunkPartition BuildPartition(const RatingDataset& train,
                                          const AttributeConfig& config,
                                          Seed seed);

struct TopNEvaluation {
  metrics::AccuracyReport precision;
  metrics::AccuracyReport recall;
  // Evaluated users without any training data.
  std::size_t cold_users = 0;
};

// Top-N lists for every user with a non-empty test set.
TopNEvaluation EvaluateTopN(const CheckinDataset& train,
                            const CheckinDataset& test, std::size_t n);

struct RatingEvaluation {
  double rmse = 0.0;
  double mae = 0.0;
  std::size_t n_predictions = 0;
};

RatingEvaluation EvaluateRatings(const recommend::MFModel& model,
                                 const RatingDataset& test,
                                 const RecommenderConfig& config);

// Trained models on disk, keyed by (training set hash, hyperparameters,
// seed). A null cache directory disables caching.
class ModelCache {
 public:
  explicit ModelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  recommend::MFModel GetOrTrain(const RatingDataset& train,
                                std::size_t n_factors,
                                const recommend::SgdConfig& sgd, Seed seed);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

diffscan::Scorer<CheckinDataset> MakeScorer(const CheckinDataset& test,
                                            const RecommenderConfig& config);

// Every call retrains from scratch with the same seed.
diffscan::Scorer<RatingDataset> MakeScorer(const RatingDataset& test,
                                           const RecommenderConfig& config,
                                           Seed seed,
                                           ModelCache* cache = nullptr);

}  // namespace dda::experiment

#endif  // DDA_EXPERIMENT_H_
