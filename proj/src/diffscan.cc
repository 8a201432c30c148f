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

#include "dda/diffscan.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dda/error.h"

namespace dda::diffscan {

template <class Data>
DifferentialResult DifferentialRun(const Data& train,
                                   const attributes::ChunkPartition& partition,
                                   const Scorer<Data>& scorer) {
  if (partition.n_points != train.size()) {
    throw InvalidArgument("differential_run: partition built for " +
                          std::to_string(partition.n_points) +
                          " points, training set has " +
                          std::to_string(train.size()));
  }
  DifferentialResult result;
  result.attribute = partition.attribute;
  result.metric = scorer.metric;
  result.labels = partition.labels;
  result.train_size = train.size();
  result.full_accuracy = scorer.score(train);

  std::vector<std::size_t> per_user(train.num_users(), 0);
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    per_user[u] = train.UserPoints(u).size();
  }
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const auto& chunk = partition.chunks[c];
    result.chunk_sizes.push_back(chunk.size());

    std::vector<std::size_t> removed(train.num_users(), 0);
    for (std::uint32_t idx : chunk) ++removed[train[idx].user];
    std::size_t emptied = 0;
    for (std::uint32_t u = 0; u < train.num_users(); ++u) {
      if (per_user[u] > 0 && removed[u] == per_user[u]) ++emptied;
    }
    result.emptied_users.push_back(emptied);

    result.accuracy.push_back(chunk.empty()
                                  ? result.full_accuracy
                                  : scorer.score(train.Without(
                                        partition.Mask(c))));
  }
  return result;
}

namespace {

ZScoreTable Standardize(std::vector<std::string> labels,
                        std::vector<double> accuracy, bool negate) {
  if (accuracy.size() < 2) {
    throw InvalidArgument("zscores: need at least 2 chunks");
  }
  ZScoreTable t;
  t.negated = negate;
  t.labels = std::move(labels);
  t.accuracy = std::move(accuracy);
  std::vector<double> v = t.accuracy;
  if (negate) {
    for (double& x : v) x = -x;
  }
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  t.mean = sum / n;
  double sq = 0.0;
  for (double x : v) sq += (x - t.mean) * (x - t.mean);
  t.sigma = std::sqrt(sq / n);
  t.z.assign(v.size(), 0.0);
  if (!(t.sigma > 0.0)) {
    t.degenerate = true;
    t.sigma = 0.0;
    return t;
  }
  for (std::size_t i = 0; i < v.size(); ++i) t.z[i] = (v[i] - t.mean) / t.sigma;
  return t;
}

}  // namespace

ZScoreTable ZScores(const DifferentialResult& result) {
  ZScoreTable t = Standardize(result.labels, result.accuracy,
                              !result.metric.higher_is_better);
  t.attribute = result.attribute;
  t.metric = result.metric.name;
  for (std::size_t size : result.chunk_sizes) {
    t.chunk_fractions.push_back(
        result.train_size == 0
            ? 0.0
            : static_cast<double>(size) / static_cast<double>(result.train_size));
  }
  return t;
}

ZScoreTable ZScoresFromValues(std::vector<std::string> labels,
                              std::vector<double> values) {
  if (labels.size() != values.size()) {
    throw InvalidArgument("zscores: label/value count mismatch");
  }
  ZScoreTable t = Standardize(std::move(labels), std::move(values), false);
  t.chunk_fractions.assign(t.z.size(), 0.0);
  return t;
}

template <class Data>
BaselineStats RandomRemovalBaseline(const Data& train, double fraction,
                                    std::size_t n_trials,
                                    const Scorer<Data>& scorer, Seed seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("baseline: fraction must be in (0, 1)");
  }
  if (n_trials < 2) throw InvalidArgument("baseline: need at least 2 trials");
  BaselineStats stats;
  stats.fraction = fraction;
  stats.n_trials = n_trials;
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    std::mt19937_64 rng = seed.Derive("baseline").Derive(trial).Engine();
    std::vector<bool> removed(train.size(), false);
    for (std::uint32_t u = 0; u < train.num_users(); ++u) {
      const auto pts = train.UserPoints(u);
      if (pts.empty()) continue;
      const double exact = fraction * static_cast<double>(pts.size());
      auto count = static_cast<std::size_t>(std::floor(exact));
      if (UniformUnit(rng) < exact - std::floor(exact)) ++count;
      std::vector<std::uint32_t> order(pts.begin(), pts.end());
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + UniformIndex(rng, order.size() - i);
        std::swap(order[i], order[j]);
        removed[order[i]] = true;
      }
    }
    stats.trials.push_back(scorer.score(train.Without(removed)));
  }
  const double n = static_cast<double>(n_trials);
  stats.mean =
      std::accumulate(stats.trials.begin(), stats.trials.end(), 0.0) / n;
  double sq = 0.0;
  for (double x : stats.trials) sq += (x - stats.mean) * (x - stats.mean);
  stats.stddev = std::sqrt(sq / (n - 1.0));
  return stats;
}

namespace {

void Center(StabilityReport& report) {
  for (const DifferentialResult& r : report.runs) {
    const double offset =
        r.accuracy.empty()
            ? 0.0
            : std::accumulate(r.accuracy.begin(), r.accuracy.end(), 0.0) /
                  static_cast<double>(r.accuracy.size());
    report.offsets.push_back(offset);
    std::vector<double> c;
    for (double a : r.accuracy) c.push_back(a - offset);
    report.centered.push_back(std::move(c));
  }
}

}  // namespace

template <class Data>
StabilityReport StabilityByUsers(const Data& ds, std::size_t n_groups,
                                 double test_fraction,
                                 const ExperimentFn<Data>& experiment,
                                 Seed seed) {
  StabilityReport report{"users"};
  const std::vector<Data> groups = SplitUsers(ds, n_groups, seed);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Seed group_seed = seed.Derive("group").Derive(g);
    auto split = HoldoutSplit(groups[g], test_fraction, group_seed);
    if (split.test.empty() || split.train.empty()) {
      throw InvalidArgument("stability: group " + std::to_string(g) +
                            " is too small to evaluate");
    }
    report.runs.push_back(experiment(split.train, split.test, group_seed));
  }
  Center(report);
  return report;
}

template <class Data>
StabilityReport StabilityByData(const Data& ds, std::size_t n_folds,
                                const ExperimentFn<Data>& experiment,
                                Seed seed) {
  StabilityReport report{"data"};
  const std::vector<std::uint32_t> fold = AssignFolds(ds, n_folds, seed);
  for (std::uint32_t f = 0; f < n_folds; ++f) {
    std::vector<bool> is_test(ds.size());
    std::vector<bool> is_train(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      is_test[i] = fold[i] == f;
      is_train[i] = !is_test[i];
    }
    const Data train = ds.Without(is_test);
    const Data test = ds.Without(is_train);
    if (test.empty() || train.empty()) {
      throw InvalidArgument("stability: fold " + std::to_string(f) +
                            " is empty");
    }
    report.runs.push_back(experiment(train, test, seed.Derive("fold").Derive(f)));
  }
  Center(report);
  return report;
}

std::vector<std::size_t> ImportanceOrder(const ZScoreTable& table) {
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.z[a] < table.z[b];
  });
  return order;
}

template DifferentialResult DifferentialRun(
    const CheckinDataset&, const attributes::ChunkPartition&,
    const Scorer<CheckinDataset>&);
template DifferentialResult DifferentialRun(
    const RatingDataset&, const attributes::ChunkPartition&,
    const Scorer<RatingDataset>&);
template BaselineStats RandomRemovalBaseline(const CheckinDataset&, double,
                                             std::size_t,
                                             const Scorer<CheckinDataset>&,
                                             Seed);
template BaselineStats RandomRemovalBaseline(const RatingDataset&, double,
                                             std::size_t,
                                             const Scorer<RatingDataset>&,
                                             Seed);
template StabilityReport StabilityByUsers(const CheckinDataset&, std::size_t,
                                          double,
                                          const ExperimentFn<CheckinDataset>&,
                                          Seed);
template StabilityReport StabilityByUsers(const RatingDataset&, std::size_t,
                                          double,
                                          const ExperimentFn<RatingDataset>&,
                                          Seed);
template StabilityReport StabilityByData(const CheckinDataset&, std::size_t,
                                         const ExperimentFn<CheckinDataset>&,
                                         Seed);
template StabilityReport StabilityByData(const RatingDataset&, std::size_t,
                                         const ExperimentFn<RatingDataset>&,
                                         Seed);

}  // namespace dda::diffscan
