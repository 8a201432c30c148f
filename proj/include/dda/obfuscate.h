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

#ifndef DDA_OBFUSCATE_H_
#define DDA_OBFUSCATE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dda/attributes.h"
#include "dda/dataset.h"
#include "dda/diffscan.h"
#include "dda/seed.h"

namespace dda::obfuscate {

// ---------------------------------------------------------------------------
// Uneven suppression

// t(z) = e^{beta z} / (e^{beta z} + e^{-beta z}), computed as a logistic.
double SuppressionWeight(double z, double beta);

// The two pieces of the suppression curve as functions of t.
inline double SuppressionLowBranch(double t, double alpha) {
  return 2.0 * alpha * t;
}
inline double SuppressionHighBranch(double t, double alpha) {
  return 2.0 * (1.0 - alpha) * t + 2.0 * alpha - 1.0;
}

// p_hat(z): 2 alpha t below t = 1/2, 2(1 - alpha) t + 2 alpha - 1 from
// there on. Tends to 1 for large positive z and 0 for large negative z;
// equals alpha at t = 1/2, where both pieces meet (returned exactly).
double SuppressionProb(double z, double alpha, double beta);

struct SuppressionPlan {
  double alpha = 0.0;
  double beta = 0.0;
  // p = p_hat / k with k = mean(p_hat) / alpha.
  double k = 1.0;
  std::vector<std::string> labels;
  std::vector<double> z;
  std::vector<double> t;
  std::vector<double> p_hat;
  std::vector<double> p;  // after clamping to [0, 1]
  // alpha minus the mean of the clamped p; 0 when nothing was clamped.
  double clamping_loss = 0.0;

  double MeanP() const;
};

// beta == 0 yields p == alpha for every chunk exactly (even suppression);
// alpha == 0 yields p == 0. Throws if every p_hat is 0 while alpha > 0.
SuppressionPlan BuildSuppressionPlan(const diffscan::ZScoreTable& table,
                                     double alpha, double beta);

template <class Data>
struct SuppressResult {
  Data data;
  std::size_t removed = 0;
  std::vector<std::uint32_t> removed_per_user;
};

// Deletes every point of chunk c independently with probability p[c].
// Points outside every chunk are kept. Each user draws from its own stream.
template <class Data>
SuppressResult<Data> Suppress(const Data& train,
                              const attributes::ChunkPartition& partition,
                              const SuppressionPlan& plan, Seed seed);

// ---------------------------------------------------------------------------
// Fake data

enum class FakeMeasure { kDensity, kKMeans };

struct FakePool {
  std::size_t multiplier = 0;
  FakeMeasure measure = FakeMeasure::kDensity;
  std::vector<CheckinPoint> fakes;
  // Per-user hardship deciles of the fakes; indices into `fakes`.
  attributes::ChunkPartition deciles;
  // Users whose unvisited catalog was too small, so some fakes repeat.
  std::vector<std::uint32_t> with_replacement_users;
};

// For every user, multiplier x (training count) fake checkins at catalog
// locations the user never visited in `train`, each at a random hour,
// ranked by hardship relative to the user's real points and split into
// n_chunks per-user deciles (n_chunks = 0 means `multiplier`, so each
// decile holds as many fakes as the user has real points).
FakePool GenerateFake(const CheckinDataset& train, std::size_t multiplier,
                      FakeMeasure measure, std::size_t n_chunks, Seed seed,
                      std::size_t kmeans_k = 2);

// Accuracy with each fake decile added to the training set in turn.
diffscan::DifferentialResult DifferentialFakeRun(
    const CheckinDataset& train, const FakePool& pool,
    const diffscan::Scorer<CheckinDataset>& scorer);

// Which fake deciles replacements come from: one weight per decile.
struct FakeChoice {
  std::vector<double> weights;

  static FakeChoice Single(std::size_t n_deciles, std::size_t decile);
  static FakeChoice Uniform(std::size_t n_deciles);
};

struct ReplaceStats {
  std::size_t removed = 0;
  std::size_t added = 0;
  std::size_t added_from_other_users = 0;
  SuppressionPlan plan;
};

// Suppresses with the plan built from (table, fraction, beta), then adds
// exactly one fake per removed point: from the same user's chosen deciles
// where possible, otherwise from other users' leftovers. Output size equals
// input size. Throws if the pool runs dry.
CheckinDataset Replace(const CheckinDataset& train,
                       const attributes::ChunkPartition& partition,
                       const diffscan::ZScoreTable& table,
                       const FakePool& pool, const FakeChoice& choice,
                       double fraction, double beta, Seed seed,
                       ReplaceStats* stats = nullptr);

// Even suppression at `fraction`, replaced by fakes drawn from all deciles
// alike: the uninformed counterpart of Replace.
CheckinDataset RandomReplace(const CheckinDataset& train,
                             const attributes::ChunkPartition& partition,
                             const FakePool& pool, double fraction, Seed seed,
                             ReplaceStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Data reduction

struct ReductionStep {
  enum class Kind { kInterval, kChunk };
  Kind kind = Kind::kChunk;
  std::size_t chunk = 0;  // index in the matching partition
  std::string label;
  double z = 0.0;
  double fraction = 0.0;    // estimated share of the training set
  double cumulative = 0.0;  // estimated share removed through this step
};

struct ReductionPlan {
  double target_fraction = 0.0;
  double noise_threshold = 1.0;
  std::vector<ReductionStep> steps;
};

inline constexpr double kDefaultNoiseThreshold = 1.0;

// Intervals whose z exceeds `noise_threshold` (removal helped) go first,
// highest z first, then hardship chunks from least to most important. Steps
// are appended while doing so brings the estimated cumulative fraction
// closer to the target. `time_table` may be null.
ReductionPlan BuildReductionPlan(const diffscan::ZScoreTable* time_table,
                                 const diffscan::ZScoreTable& hardship_table,
                                 double target_fraction,
                                 double noise_threshold = kDefaultNoiseThreshold);

// As above, but step shares are measured on the partitions the tables were
// computed from, counting each point once: a step's fraction is the share of
// points no earlier step removes.
ReductionPlan BuildReductionPlan(
    const diffscan::ZScoreTable* time_table,
    const attributes::ChunkPartition* time_partition,
    const diffscan::ZScoreTable& hardship_table,
    const attributes::ChunkPartition& hardship_partition,
    double target_fraction, double noise_threshold = kDefaultNoiseThreshold);

template <class Data>
struct ReductionResult {
  Data data;
  // Actual share of the input removed after each step (overlaps counted
  // once).
  std::vector<double> cumulative_fraction;
};

// Removes the plan's chunks in order. `time_partition` may be null when the
// plan has no interval steps.
template <class Data>
ReductionResult<Data> ApplyReduction(
    const Data& train, const ReductionPlan& plan,
    const attributes::ChunkPartition* time_partition,
    const attributes::ChunkPartition& hardship_partition);

}  // namespace dda::obfuscate

#endif  // DDA_OBFUSCATE_H_
