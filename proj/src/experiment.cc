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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dda/error.h"

namespace dda::experiment {

namespace {

template <class Kind, std::size_t N>
Kind Lookup(std::string_view what, std::string_view name,
            const std::pair<std::string_view, Kind> (&table)[N]) {
  for (const auto& [key, kind] : table) {
    if (key == name) return kind;
  }
  std::string known;
  for (const auto& [key, kind] : table) {
    if (!known.empty()) known += ", ";
    known += key;
  }
  throw InvalidArgument("unknown " + std::string(what) + " '" +
                        std::string(name) + "'; registered: " + known);
}

constexpr std::pair<std::string_view, AttributeKind> kAttributes[] = {
    {"kmeans", AttributeKind::kKMeans},
    {"density", AttributeKind::kDensity},
    {"time", AttributeKind::kTime},
    {"rating", AttributeKind::kRating},
};
constexpr std::pair<std::string_view, RecommenderKind> kRecommenders[] = {
    {"cosine", RecommenderKind::kCosine},
    {"mf", RecommenderKind::kMf},
};
constexpr std::pair<std::string_view, MetricKind> kMetrics[] = {
    {"precision", MetricKind::kPrecision},
    {"recall", MetricKind::kRecall},
    {"rmse", MetricKind::kRmse},
    {"mae", MetricKind::kMae},
};

template <class Kind, std::size_t N>
std::string_view Reverse(Kind kind,
                         const std::pair<std::string_view, Kind> (&table)[N]) {
  for (const auto& [key, k] : table) {
    if (k == kind) return key;
  }
  return "unknown";
}

}  // namespace

std::string_view Name(AttributeKind kind) { return Reverse(kind, kAttributes); }
std::string_view Name(RecommenderKind kind) {
  return Reverse(kind, kRecommenders);
}
std::string_view Name(MetricKind kind) { return Reverse(kind, kMetrics); }

AttributeKind ParseAttribute(std::string_view name) {
  return Lookup("attribute", name, kAttributes);
}
RecommenderKind ParseRecommender(std::string_view name) {
  return Lookup("recommender", name, kRecommenders);
}
MetricKind ParseMetric(std::string_view name) {
  return Lookup("metric", name, kMetrics);
}

attributes::ChunkPartition BuildPartition(
    const CheckinDataset& train, const AttributeConfig& config, Seed seed,
    std::vector<attributes::TimeInterval>* intervals_out,
    const std::vector<attributes::TimeInterval>* fixed_intervals) {
  switch (config.kind) {
    case AttributeKind::kKMeans:
      return attributes::PartitionDeciles(
          attributes::RankDatasetKMeans(train, config.kmeans_k,
                                        config.min_points,
                                        seed.Derive("kmeans")),
          config.chunks, train.size());
    case AttributeKind::kDensity:
      return attributes::PartitionDeciles(
          attributes::RankDatasetDensity(train, config.min_points),
          config.chunks, train.size());
    case AttributeKind::kTime: {
      std::vector<attributes::TimeInterval> intervals =
          fixed_intervals != nullptr
              ? *fixed_intervals
              : attributes::BuildTimeIntervals(train, config.interval_min_frac,
                                               config.interval_max_frac);
      auto part = attributes::TimePartition(train, intervals);
      if (intervals_out != nullptr) *intervals_out = std::move(intervals);
      return part;
    }
    case AttributeKind::kRating:
      throw InvalidArgument("the rating attribute needs rating data");
  }
  throw InvalidArgument("unhandled attribute");
}

attributes::ChunkPartition BuildPartition(const RatingDataset& train,
                                          const AttributeConfig& config,
                                          Seed seed) {
  if (config.kind != AttributeKind::kRating) {
    throw InvalidArgument("attribute '" + std::string(Name(config.kind)) +
                          "' needs checkin data; rating data supports: rating");
  }
  return attributes::PartitionDeciles(
      attributes::RankDatasetRating(train, seed.Derive("rating")),
      config.chunks, train.size());
}

TopNEvaluation EvaluateTopN(const CheckinDataset& train,
                            const CheckinDataset& test, std::size_t n) {
  if (n == 0) throw InvalidArgument("top-n: n must be >= 1");
  if (train.shared_catalog() != test.shared_catalog()) {
    throw InvalidArgument("top-n: train and test use different catalogs");
  }
  const recommend::SimilarityContext ctx(train);
  metrics::Recommendations recs(test.num_users());
  TopNEvaluation out;
  for (std::uint32_t u = 0; u < test.num_users(); ++u) {
    if (test.UserPoints(u).empty()) continue;
    if (u >= ctx.num_users() || ctx.user_vector(u).empty()) ++out.cold_users;
    recs[u] = u < ctx.num_users()
                  ? ctx.TopN(u, n)
                  : ctx.TopN(std::span<const std::uint32_t>(), std::nullopt, n);
  }
  out.precision = metrics::PrecisionAtN(recs, test, n);
  out.recall = metrics::MacroRecall(recs, test, n);
  return out;
}

RatingEvaluation EvaluateRatings(const recommend::MFModel& model,
                                 const RatingDataset& test,
                                 const RecommenderConfig& config) {
  std::vector<double> predicted;
  std::vector<double> actual;
  predicted.reserve(test.size());
  actual.reserve(test.size());
  for (const RatingPoint& r : test.points()) {
    double p = model.Predict(r.user, r.item);
    if (config.clamp) p = std::clamp(p, config.clamp_min, config.clamp_max);
    predicted.push_back(p);
    actual.push_back(r.value);
  }
  RatingEvaluation out;
  out.rmse = metrics::Rmse(predicted, actual);
  out.mae = metrics::Mae(predicted, actual);
  out.n_predictions = predicted.size();
  return out;
}

recommend::MFModel ModelCache::GetOrTrain(const RatingDataset& train,
                                          std::size_t n_factors,
                                          const recommend::SgdConfig& sgd,
                                          Seed seed) {
  if (dir_.empty()) {
    ++misses_;
    return recommend::TrainMf(train, n_factors, sgd, seed);
  }
  char key[160];
  std::snprintf(key, sizeof(key), "%016llx-f%zu-lr%a-reg%a-e%d-init%a-s%016llx",
                static_cast<unsigned long long>(ContentHash(train)), n_factors,
                sgd.learning_rate, sgd.regularization, sgd.epochs,
                sgd.init_stddev, static_cast<unsigned long long>(seed.value()));
  const std::filesystem::path file =
      dir_ / ("mf-" +
              std::to_string(Fnv1a64(key)) + ".model");
  if (std::ifstream in(file); in) {
    try {
      recommend::MFModel m = recommend::LoadModel(in);
      ++hits_;
      return m;
    } catch (const Error&) {
      // Corrupt or stale entry; retrain and overwrite.
    }
  }
  ++misses_;
  recommend::MFModel m = recommend::TrainMf(train, n_factors, sgd, seed);
  std::filesystem::create_directories(dir_);
  std::ofstream out(file);
  recommend::SaveModel(m, out);
  return m;
}

diffscan::Scorer<CheckinDataset> MakeScorer(const CheckinDataset& test,
                                            const RecommenderConfig& config) {
  if (config.kind != RecommenderKind::kCosine) {
    throw InvalidArgument("checkin data needs the cosine recommender");
  }
  if (config.metric != MetricKind::kPrecision &&
      config.metric != MetricKind::kRecall) {
    throw InvalidArgument("checkin data supports metrics precision, recall");
  }
  const std::size_t n = config.top_n;
  const bool precision = config.metric == MetricKind::kPrecision;
  diffscan::Metric metric{
      (precision ? "precision@" : "recall@") + std::to_string(n), true};
  return {metric, [test, n, precision](const CheckinDataset& train) {
            const TopNEvaluation e = EvaluateTopN(train, test, n);
            return precision ? e.precision.value : e.recall.value;
          }};
}

diffscan::Scorer<RatingDataset> MakeScorer(const RatingDataset& test,
                                           const RecommenderConfig& config,
                                           Seed seed, ModelCache* cache) {
  if (config.kind != RecommenderKind::kMf) {
    throw InvalidArgument("rating data needs the mf recommender");
  }
  if (config.metric != MetricKind::kRmse && config.metric != MetricKind::kMae) {
    throw InvalidArgument("rating data supports metrics rmse, mae");
  }
  const bool rmse = config.metric == MetricKind::kRmse;
  diffscan::Metric metric{rmse ? "rmse" : "mae", false};
  return {metric, [test, config, seed, cache, rmse](const RatingDataset& train) {
            const recommend::MFModel m =
                cache != nullptr
                    ? cache->GetOrTrain(train, config.n_factors, config.sgd,
                                        seed)
                    : recommend::TrainMf(train, config.n_factors, config.sgd,
                                         seed);
            const RatingEvaluation e = EvaluateRatings(m, test, config);
            return rmse ? e.rmse : e.mae;
          }};
}

}  // namespace dda::experiment
