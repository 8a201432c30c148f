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

#include "dda/obfuscate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dda/error.h"
#include "dda/geo.h"

namespace dda::obfuscate {

double SuppressionWeight(double z, double beta) {
  return 1.0 / (1.0 + std::exp(-2.0 * beta * z));
}

double SuppressionProb(double z, double alpha, double beta) {
  const double t = SuppressionWeight(z, beta);
  if (t == 0.5) return alpha;
  return t < 0.5 ? SuppressionLowBranch(t, alpha)
                 : SuppressionHighBranch(t, alpha);
}

double SuppressionPlan::MeanP() const {
  if (p.empty()) return 0.0;
  return std::accumulate(p.begin(), p.end(), 0.0) /
         static_cast<double>(p.size());
}

SuppressionPlan BuildSuppressionPlan(const diffscan::ZScoreTable& table,
                                     double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("suppression: alpha must be in [0, 1]");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("suppression: beta must be >= 0");
  }
  if (table.size() == 0) throw InvalidArgument("suppression: empty z-table");
  SuppressionPlan plan;
  plan.alpha = alpha;
  plan.beta = beta;
  plan.labels = table.labels;
  plan.z = table.z;
  for (double z : table.z) {
    plan.t.push_back(SuppressionWeight(z, beta));
    plan.p_hat.push_back(SuppressionProb(z, alpha, beta));
  }
  const std::size_t n = plan.p_hat.size();
  if (beta == 0.0) {
    plan.k = 1.0;
    plan.p.assign(n, alpha);
    return plan;
  }
  if (alpha == 0.0) {
    plan.k = std::numeric_limits<double>::infinity();
    plan.p.assign(n, 0.0);
    return plan;
  }
  const double mean_hat =
      std::accumulate(plan.p_hat.begin(), plan.p_hat.end(), 0.0) /
      static_cast<double>(n);
  if (!(mean_hat > 0.0)) {
    throw RuntimeError(
        "suppression: every p_hat is 0, cannot normalize to alpha");
  }
  plan.k = mean_hat / alpha;
  for (double ph : plan.p_hat) plan.p.push_back(std::clamp(ph / plan.k, 0.0, 1.0));
  plan.clamping_loss = alpha - plan.MeanP();
  if (std::abs(plan.clamping_loss) < 1e-12) plan.clamping_loss = 0.0;
  return plan;
}

namespace {

std::vector<std::int32_t> ChunkOf(const attributes::ChunkPartition& partition) {
  std::vector<std::int32_t> chunk_of(partition.n_points, -1);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    for (std::uint32_t idx : partition.chunks[c]) {
      chunk_of[idx] = static_cast<std::int32_t>(c);
    }
  }
  return chunk_of;
}

}  // namespace

template <class Data>
SuppressResult<Data> Suppress(const Data& train,
                              const attributes::ChunkPartition& partition,
                              const SuppressionPlan& plan, Seed seed) {
  if (partition.n_points != train.size()) {
    throw InvalidArgument("suppress: partition does not match training set");
  }
  if (plan.p.size() != partition.size()) {
    throw InvalidArgument("suppress: plan has " + std::to_string(plan.p.size()) +
                          " chunks, partition has " +
                          std::to_string(partition.size()));
  }
  const std::vector<std::int32_t> chunk_of = ChunkOf(partition);
  SuppressResult<Data> out;
  out.removed_per_user.assign(train.num_users(), 0);
  std::vector<bool> removed(train.size(), false);
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    const auto pts = train.UserPoints(u);
    if (pts.empty()) continue;
    std::mt19937_64 rng = seed.Derive(u).Engine();
    for (std::uint32_t idx : pts) {
      const std::int32_t c = chunk_of[idx];
      if (c < 0) continue;
      if (UniformUnit(rng) < plan.p[c]) {
        removed[idx] = true;
        ++out.removed_per_user[u];
        ++out.removed;
      }
    }
  }
  out.data = train.Without(removed);
  return out;
}

template SuppressResult<CheckinDataset> Suppress(
    const CheckinDataset&, const attributes::ChunkPartition&,
    const SuppressionPlan&, Seed);
template SuppressResult<RatingDataset> Suppress(
    const RatingDataset&, const attributes::ChunkPartition&,
    const SuppressionPlan&, Seed);

// ---------------------------------------------------------------------------
// Fakes

FakePool GenerateFake(const CheckinDataset& train, std::size_t multiplier,
                      FakeMeasure measure, std::size_t n_chunks, Seed seed,
                      std::size_t kmeans_k) {
  const Catalog& cat = train.catalog();
  if (cat.num_items() == 0) throw InvalidArgument("fake: empty catalog");
  if (!cat.has_positions()) {
    throw InvalidArgument("fake: catalog has no coordinates");
  }
  if (multiplier == 0) throw InvalidArgument("fake: multiplier must be >= 1");
  if (n_chunks == 0) n_chunks = multiplier;

  FakePool pool;
  pool.multiplier = multiplier;
  pool.measure = measure;
  attributes::AttributeRanking ranking;
  ranking.attribute =
      measure == FakeMeasure::kDensity ? "fake-density" : "fake-kmeans";
  ranking.per_user.resize(train.num_users());

  const auto n_items = static_cast<std::uint32_t>(cat.num_items());
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    const auto pts = train.UserPoints(u);
    if (pts.empty()) continue;
    std::mt19937_64 rng = seed.Derive(u).Engine();

    std::vector<bool> visited(n_items, false);
    std::vector<geo::GeoPoint> real;
    for (std::uint32_t idx : pts) {
      visited[train[idx].item] = true;
      real.push_back(cat.position(train[idx].item));
    }
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t l = 0; l < n_items; ++l) {
      if (!visited[l]) candidates.push_back(l);
    }
    if (candidates.empty()) continue;

    const std::size_t count = multiplier * pts.size();
    std::vector<std::uint32_t> chosen;
    chosen.reserve(count);
    const std::size_t distinct = std::min(count, candidates.size());
    for (std::size_t i = 0; i < distinct; ++i) {
      const std::size_t j = i + UniformIndex(rng, candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
      chosen.push_back(candidates[i]);
    }
    if (distinct < count) {
      pool.with_replacement_users.push_back(u);
      while (chosen.size() < count) {
        chosen.push_back(candidates[UniformIndex(rng, candidates.size())]);
      }
    }

    // Hardship of each fake relative to the user's real points.
    std::vector<double> score(chosen.size());
    if (measure == FakeMeasure::kDensity) {
      const geo::UnitVectors unit = geo::ToUnitVectors(real);
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        score[i] = geo::NearestKm(unit, cat.position(chosen[i]), unit.size());
      }
    } else {
      const geo::KMeansResult km =
          geo::KMeans(real, kmeans_k, seed.Derive("fake-kmeans").Derive(u));
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const geo::GeoPoint& c : km.centroids) {
          best = std::min(best, geo::HaversineKm(cat.position(chosen[i]), c));
        }
        score[i] = best;
      }
    }

    attributes::RankingEntry entry;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const auto fake_index = static_cast<std::uint32_t>(pool.fakes.size());
      const auto hour = static_cast<int>(UniformIndex(rng, 24));
      pool.fakes.push_back(CheckinPoint{u, chosen[i], 1u << hour});
      entry.push_back(attributes::RankedPoint{fake_index, score[i]});
    }
    std::stable_sort(entry.begin(), entry.end(),
                     [](const attributes::RankedPoint& a,
                        const attributes::RankedPoint& b) {
                       return a.score < b.score;
                     });
    ranking.per_user[u] = std::move(entry);
  }
  pool.deciles =
      attributes::PartitionDeciles(ranking, n_chunks, pool.fakes.size());
  return pool;
}

diffscan::DifferentialResult DifferentialFakeRun(
    const CheckinDataset& train, const FakePool& pool,
    const diffscan::Scorer<CheckinDataset>& scorer) {
  diffscan::DifferentialResult result;
  result.attribute = pool.deciles.attribute;
  result.metric = scorer.metric;
  result.labels = pool.deciles.labels;
  result.train_size = train.size();
  result.full_accuracy = scorer.score(train);
  for (const auto& chunk : pool.deciles.chunks) {
    result.chunk_sizes.push_back(chunk.size());
    result.emptied_users.push_back(0);
    if (chunk.empty()) {
      result.accuracy.push_back(result.full_accuracy);
      continue;
    }
    std::vector<CheckinPoint> extra;
    extra.reserve(chunk.size());
    for (std::uint32_t idx : chunk) extra.push_back(pool.fakes[idx]);
    result.accuracy.push_back(scorer.score(train.Concat(extra)));
  }
  return result;
}

FakeChoice FakeChoice::Single(std::size_t n_deciles, std::size_t decile) {
  if (decile >= n_deciles) throw InvalidArgument("fake choice: no such decile");
  FakeChoice c;
  c.weights.assign(n_deciles, 0.0);
  c.weights[decile] = 1.0;
  return c;
}

FakeChoice FakeChoice::Uniform(std::size_t n_deciles) {
  FakeChoice c;
  c.weights.assign(n_deciles, 1.0);
  return c;
}

namespace {

// Adds one fake per removed point. Per user, fakes come from the user's
// own deciles, each slot drawing a decile by weight among those with fakes
// left; remaining slots take other users' leftovers in random order.
CheckinDataset RefillWithFakes(const CheckinDataset& suppressed,
                               const std::vector<std::uint32_t>& removed,
                               const FakePool& pool, const FakeChoice& choice,
                               Seed seed, ReplaceStats* stats) {
  const std::size_t n_deciles = pool.deciles.size();
  if (choice.weights.size() != n_deciles) {
    throw InvalidArgument("replace: fake choice has " +
                          std::to_string(choice.weights.size()) +
                          " weights, pool has " + std::to_string(n_deciles) +
                          " deciles");
  }
  for (double w : choice.weights) {
    if (!(w >= 0.0)) throw InvalidArgument("replace: negative decile weight");
  }
  const std::size_t n_users = removed.size();
  // queues[u][d]: user u's fakes in decile d, shuffled.
  std::vector<std::vector<std::vector<std::uint32_t>>> queues(
      n_users, std::vector<std::vector<std::uint32_t>>(n_deciles));
  for (std::size_t d = 0; d < n_deciles; ++d) {
    if (choice.weights[d] == 0.0) continue;
    for (std::uint32_t idx : pool.deciles.chunks[d]) {
      const std::uint32_t u = pool.fakes[idx].user;
      if (u < n_users) queues[u][d].push_back(idx);
    }
  }

  std::vector<CheckinPoint> added;
  std::size_t deficit = 0;
  for (std::uint32_t u = 0; u < n_users; ++u) {
    if (removed[u] == 0) continue;
    std::mt19937_64 rng = seed.Derive(u).Engine();
    for (auto& q : queues[u]) {
      for (std::size_t i = q.size(); i > 1; --i) {
        std::swap(q[i - 1], q[UniformIndex(rng, i)]);
      }
    }
    for (std::uint32_t slot = 0; slot < removed[u]; ++slot) {
      double total = 0.0;
      for (std::size_t d = 0; d < n_deciles; ++d) {
        if (!queues[u][d].empty()) total += choice.weights[d];
      }
      if (!(total > 0.0)) {
        deficit += removed[u] - slot;
        break;
      }
      double target = UniformUnit(rng) * total;
      std::size_t pick = n_deciles;
      for (std::size_t d = 0; d < n_deciles; ++d) {
        if (queues[u][d].empty() || choice.weights[d] == 0.0) continue;
        pick = d;
        target -= choice.weights[d];
        if (target < 0.0) break;
      }
      added.push_back(pool.fakes[queues[u][pick].back()]);
      queues[u][pick].pop_back();
    }
  }

  std::size_t from_others = 0;
  if (deficit > 0) {
    std::vector<std::uint32_t> leftovers;
    for (const auto& per_user : queues) {
      for (const auto& q : per_user) {
        leftovers.insert(leftovers.end(), q.begin(), q.end());
      }
    }
    if (leftovers.size() < deficit) {
      throw RuntimeError("replace: insufficient fakes (" +
                         std::to_string(deficit - leftovers.size()) +
                         " short); generate a larger pool");
    }
    std::mt19937_64 rng = seed.Derive("global-fill").Engine();
    for (std::size_t i = 0; i < deficit; ++i) {
      const std::size_t j = i + UniformIndex(rng, leftovers.size() - i);
      std::swap(leftovers[i], leftovers[j]);
      added.push_back(pool.fakes[leftovers[i]]);
    }
    from_others = deficit;
  }
  if (stats != nullptr) {
    stats->added = added.size();
    stats->added_from_other_users = from_others;
  }
  return suppressed.Concat(added);
}

}  // namespace

CheckinDataset Replace(const CheckinDataset& train,
                       const attributes::ChunkPartition& partition,
                       const diffscan::ZScoreTable& table,
                       const FakePool& pool, const FakeChoice& choice,
                       double fraction, double beta, Seed seed,
                       ReplaceStats* stats) {
  SuppressionPlan plan = BuildSuppressionPlan(table, fraction, beta);
  if (plan.p.size() != partition.size()) {
    throw InvalidArgument("replace: z-table and partition differ in size");
  }
  auto suppressed = Suppress(train, partition, plan, seed.Derive("suppress"));
  if (stats != nullptr) {
    stats->removed = suppressed.removed;
    stats->plan = plan;
  }
  if (suppressed.removed == 0) {
    if (stats != nullptr) stats->added = 0;
    return train;
  }
  return RefillWithFakes(suppressed.data, suppressed.removed_per_user, pool,
                         choice, seed.Derive("fill"), stats);
}

CheckinDataset RandomReplace(const CheckinDataset& train,
                             const attributes::ChunkPartition& partition,
                             const FakePool& pool, double fraction, Seed seed,
                             ReplaceStats* stats) {
  diffscan::ZScoreTable flat;
  flat.labels = partition.labels;
  flat.z.assign(partition.size(), 0.0);
  return Replace(train, partition, flat, pool,
                 FakeChoice::Uniform(pool.deciles.size()), fraction, 0.0, seed,
                 stats);
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// Noisy intervals by descending z, then hardship chunks by descending z;
// ties keep chunk order.
std::vector<ReductionStep> ReductionCandidates(
    const diffscan::ZScoreTable* time_table,
    const diffscan::ZScoreTable& hardship_table, double noise_threshold) {
  auto share = [](const diffscan::ZScoreTable& t, std::size_t c) {
    return c < t.chunk_fractions.size() ? t.chunk_fractions[c] : 0.0;
  };
  std::vector<ReductionStep> candidates;
  if (time_table != nullptr) {
    std::vector<std::size_t> noisy;
    for (std::size_t c = 0; c < time_table->size(); ++c) {
      if (time_table->z[c] > noise_threshold) noisy.push_back(c);
    }
    std::stable_sort(noisy.begin(), noisy.end(),
                     [&](std::size_t a, std::size_t b) {
                       return time_table->z[a] > time_table->z[b];
                     });
    for (std::size_t c : noisy) {
      candidates.push_back(ReductionStep{ReductionStep::Kind::kInterval, c,
                                         time_table->labels[c],
                                         time_table->z[c],
                                         share(*time_table, c)});
    }
  }
  std::vector<std::size_t> order(hardship_table.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return hardship_table.z[a] > hardship_table.z[b];
                   });
  for (std::size_t c : order) {
    candidates.push_back(ReductionStep{ReductionStep::Kind::kChunk, c,
                                       hardship_table.labels[c],
                                       hardship_table.z[c],
                                       share(hardship_table, c)});
  }
  return candidates;
}

void CheckTarget(double target_fraction, double available) {
  if (!(target_fraction >= 0.0 && target_fraction <= 1.0)) {
    throw InvalidArgument("reduction: target fraction must be in [0, 1]");
  }
  if (target_fraction > available + 1e-9) {
    throw InvalidArgument("reduction: target fraction " +
                          std::to_string(target_fraction) +
                          " exceeds the removable share " +
                          std::to_string(available));
  }
}

// Appends candidates while the cumulative share moves closer to the target.
ReductionPlan TakeSteps(std::vector<ReductionStep> candidates,
                        double target_fraction, double noise_threshold) {
  ReductionPlan plan;
  plan.target_fraction = target_fraction;
  plan.noise_threshold = noise_threshold;
  if (target_fraction == 0.0) return plan;
  double cumulative = 0.0;
  for (ReductionStep s : candidates) {
    const double next = cumulative + s.fraction;
    // A step adding nothing new rides along with its neighbours.
    if (s.fraction > 0.0 &&
        !(std::abs(next - target_fraction) <
          std::abs(cumulative - target_fraction))) {
      break;
    }
    cumulative = next;
    s.cumulative = cumulative;
    plan.steps.push_back(s);
  }
  return plan;
}

}  // namespace

ReductionPlan BuildReductionPlan(const diffscan::ZScoreTable* time_table,
                                 const diffscan::ZScoreTable& hardship_table,
                                 double target_fraction,
                                 double noise_threshold) {
  std::vector<ReductionStep> candidates =
      ReductionCandidates(time_table, hardship_table, noise_threshold);
  double available = 0.0;
  for (const ReductionStep& s : candidates) available += s.fraction;
  CheckTarget(target_fraction, available);
  return TakeSteps(std::move(candidates), target_fraction, noise_threshold);
}

ReductionPlan BuildReductionPlan(
    const diffscan::ZScoreTable* time_table,
    const attributes::ChunkPartition* time_partition,
    const diffscan::ZScoreTable& hardship_table,
    const attributes::ChunkPartition& hardship_partition,
    double target_fraction, double noise_threshold) {
  if ((time_table == nullptr) != (time_partition == nullptr)) {
    throw InvalidArgument("reduction: time table and partition go together");
  }
  if (time_partition != nullptr &&
      (time_partition->n_points != hardship_partition.n_points ||
       time_partition->size() != time_table->size())) {
    throw InvalidArgument("reduction: partitions of different datasets");
  }
  if (hardship_partition.size() != hardship_table.size()) {
    throw InvalidArgument("reduction: hardship table and partition differ");
  }
  const std::size_t n = hardship_partition.n_points;
  if (n == 0) throw InvalidArgument("reduction: empty dataset");
  std::vector<ReductionStep> candidates =
      ReductionCandidates(time_table, hardship_table, noise_threshold);
  // Marginal share: points that no earlier candidate already covers.
  std::vector<bool> taken(n, false);
  std::size_t total = 0;
  for (ReductionStep& s : candidates) {
    const auto& part = s.kind == ReductionStep::Kind::kInterval
                           ? *time_partition
                           : hardship_partition;
    std::size_t fresh = 0;
    for (std::uint32_t i : part.chunks[s.chunk]) {
      if (!taken[i]) {
        taken[i] = true;
        ++fresh;
      }
    }
    total += fresh;
    s.fraction = static_cast<double>(fresh) / static_cast<double>(n);
  }
  CheckTarget(target_fraction,
              static_cast<double>(total) / static_cast<double>(n));
  return TakeSteps(std::move(candidates), target_fraction, noise_threshold);
}

template <class Data>
ReductionResult<Data> ApplyReduction(
    const Data& train, const ReductionPlan& plan,
    const attributes::ChunkPartition* time_partition,
    const attributes::ChunkPartition& hardship_partition) {
  std::vector<bool> removed(train.size(), false);
  std::size_t n_removed = 0;
  ReductionResult<Data> out;
  for (const ReductionStep& step : plan.steps) {
    const attributes::ChunkPartition* part = &hardship_partition;
    if (step.kind == ReductionStep::Kind::kInterval) {
      if (time_partition == nullptr) {
        throw InvalidArgument("reduction: plan removes an interval but no "
                              "time partition was given");
      }
      part = time_partition;
    }
    if (part->n_points != train.size() || step.chunk >= part->size()) {
      throw InvalidArgument("reduction: step '" + step.label +
                            "' does not match the partition");
    }
    if (part->labels[step.chunk] != step.label) {
      throw InvalidArgument("reduction: step label '" + step.label +
                            "' vs partition label '" +
                            part->labels[step.chunk] + "'");
    }
    for (std::uint32_t idx : part->chunks[step.chunk]) {
      if (!removed[idx]) {
        removed[idx] = true;
        ++n_removed;
      }
    }
    out.cumulative_fraction.push_back(
        train.empty() ? 0.0
                      : static_cast<double>(n_removed) /
                            static_cast<double>(train.size()));
  }
  out.data = train.Without(removed);
  return out;
}

template ReductionResult<CheckinDataset> ApplyReduction(
    const CheckinDataset&, const ReductionPlan&,
    const attributes::ChunkPartition*, const attributes::ChunkPartition&);
template ReductionResult<RatingDataset> ApplyReduction(
    const RatingDataset&, const ReductionPlan&,
    const attributes::ChunkPartition*, const attributes::ChunkPartition&);

}  // namespace dda::obfuscate
