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

#ifndef DDA_DIFFSCAN_H_
#define DDA_DIFFSCAN_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dda/attributes.h"
#include "dda/dataset.h"
#include "dda/seed.h"

namespace dda::diffscan {

struct Metric {
  std::string name;
  bool higher_is_better = true;
};

// A fixed recommender + fixed metric + fixed test set, as a function of the
// training set alone. Must be deterministic.
template <class Data>
struct Scorer {
  Metric metric;
  std::function<double(const Data& train)> score;
};

// Accuracy with each chunk removed from the training set.
struct DifferentialResult {
  std::string attribute;
  Metric metric;
  std::vector<std::string> labels;
  std::vector<double> accuracy;
  std::vector<std::size_t> chunk_sizes;
  // Users that had training data and lost all of it with the chunk removed.
  std::vector<std::size_t> emptied_users;
  double full_accuracy = 0.0;
  std::size_t train_size = 0;

  std::size_t size() const { return accuracy.size(); }
};

// For every chunk c, scores train minus c (all users at once) and records
// the full-data score.
template <class Data>
DifferentialResult DifferentialRun(const Data& train,
                                   const attributes::ChunkPartition& partition,
                                   const Scorer<Data>& scorer);

// z_i = (a_i - mean(a)) / sigma(a), sigma the population standard
// deviation. Lower-is-better metrics are negated first, so a positive z
// always marks a chunk whose removal hurt less than average.
struct ZScoreTable {
  std::string attribute;
  std::string metric;
  bool negated = false;
  std::vector<std::string> labels;
  std::vector<double> accuracy;
  std::vector<double> z;
  // Share of the training set in each chunk (0 when unknown).
  std::vector<double> chunk_fractions;
  double mean = 0.0;   // of the (possibly negated) accuracies
  double sigma = 0.0;  // population standard deviation of the same
  bool degenerate = false;  // sigma == 0; every z is 0

  std::size_t size() const { return z.size(); }
};

ZScoreTable ZScores(const DifferentialResult& result);

// Standardizes raw values directly (higher = less important).
ZScoreTable ZScoresFromValues(std::vector<std::string> labels,
                              std::vector<double> values);

struct BaselineStats {
  double fraction = 0.0;
  std::size_t n_trials = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::vector<double> trials;
};

// Each trial removes `fraction` of every user's points uniformly at random
// (stochastic rounding of the per-user count keeps the expected removal
// exact) and rescores.
template <class Data>
BaselineStats RandomRemovalBaseline(const Data& train, double fraction,
                                    std::size_t n_trials,
                                    const Scorer<Data>& scorer, Seed seed);

// One full differential experiment on a (train, test) pair.
template <class Data>
using ExperimentFn =
    std::function<DifferentialResult(const Data& train, const Data& test,
                                     Seed seed)>;

struct StabilityReport {
  std::string kind;  // "users" or "data"
  std::vector<DifferentialResult> runs;
  // Per run, the mean chunk accuracy subtracted to center the curve.
  std::vector<double> offsets;
  std::vector<std::vector<double>> centered;
};

// Splits users into n_groups disjoint groups; each group is split into
// train/test with `test_fraction` and analysed on its own.
template <class Data>
StabilityReport StabilityByUsers(const Data& ds, std::size_t n_groups,
                                 double test_fraction,
                                 const ExperimentFn<Data>& experiment,
                                 Seed seed);

// Deals each user's points into n_folds pieces; fold f serves once as the
// test set with the rest as training data.
template <class Data>
StabilityReport StabilityByData(const Data& ds, std::size_t n_folds,
                                const ExperimentFn<Data>& experiment,
                                Seed seed);

// Chunk indices ordered from most to least important (ascending z).
std::vector<std::size_t> ImportanceOrder(const ZScoreTable& table);

}  // namespace dda::diffscan

#endif  // DDA_DIFFSCAN_H_
