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
#include <cstdio>
#include <limits>
#include <numeric>

#include "dda/error.h"

namespace dda::attributes {

namespace {

void SortByScore(RankingEntry& entry) {
  std::stable_sort(entry.begin(), entry.end(),
                   [](const RankedPoint& a, const RankedPoint& b) {
                     return a.score < b.score;
                   });
}

std::vector<geo::GeoPoint> UserPositions(const CheckinDataset& ds,
                                         std::span<const std::uint32_t> pts) {
  std::vector<geo::GeoPoint> out;
  out.reserve(pts.size());
  for (std::uint32_t idx : pts) out.push_back(ds.catalog().position(ds[idx].item));
  return out;
}

// Rewrites entry indices from user-local positions to dataset positions.
RankingEntry ToDatasetIndices(RankingEntry entry,
                              std::span<const std::uint32_t> pts) {
  for (RankedPoint& r : entry) r.point = pts[r.point];
  return entry;
}

void RequirePositions(const CheckinDataset& ds) {
  if (!ds.catalog().has_positions() && ds.num_items() > 0) {
    throw InvalidArgument("hardship ranking needs location coordinates");
  }
}

}  // namespace

RankingEntry RankHardshipKMeans(std::span<const geo::GeoPoint> points,
                                std::size_t k, Seed seed) {
  const geo::KMeansResult km = geo::KMeans(points, k, seed);
  RankingEntry entry;
  entry.reserve(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const geo::GeoPoint& c : km.centroids) {
      best = std::min(best, geo::HaversineKm(points[i], c));
    }
    entry.push_back(RankedPoint{i, best});
  }
  SortByScore(entry);
  return entry;
}

RankingEntry RankHardshipDensity(std::span<const geo::GeoPoint> points) {
  if (points.size() < 2) {
    throw InvalidArgument("density hardship needs at least 2 points");
  }
  const geo::UnitVectors unit = geo::ToUnitVectors(points);
  RankingEntry entry;
  entry.reserve(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    entry.push_back(RankedPoint{i, geo::NearestKm(unit, points[i], i)});
  }
  SortByScore(entry);
  return entry;
}

RankingEntry RankByRating(std::span<const double> values, Seed seed) {
  RankingEntry entry;
  entry.reserve(values.size());
  for (std::uint32_t i = 0; i < values.size(); ++i) {
    entry.push_back(RankedPoint{i, values[i]});
  }
  // Shuffle, then stable sort: ties end up in uniformly random order.
  std::mt19937_64 rng = seed.Engine();
  for (std::size_t i = entry.size(); i > 1; --i) {
    std::swap(entry[i - 1], entry[UniformIndex(rng, i)]);
  }
  SortByScore(entry);
  return entry;
}

AttributeRanking RankDatasetKMeans(const CheckinDataset& train, std::size_t k,
                                   std::size_t min_points, Seed seed) {
  RequirePositions(train);
  AttributeRanking ranking{"kmeans"};
  ranking.per_user.resize(train.num_users());
  const std::size_t needed = std::max(k, min_points);
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    const auto pts = train.UserPoints(u);
    if (pts.empty()) continue;
    if (pts.size() < needed) {
      ranking.excluded_users.push_back(u);
      continue;
    }
    const auto positions = UserPositions(train, pts);
    ranking.per_user[u] = ToDatasetIndices(
        RankHardshipKMeans(positions, k, seed.Derive(u)), pts);
  }
  return ranking;
}

AttributeRanking RankDatasetDensity(const CheckinDataset& train,
                                    std::size_t min_points) {
  RequirePositions(train);
  AttributeRanking ranking{"density"};
  ranking.per_user.resize(train.num_users());
  const std::size_t needed = std::max<std::size_t>(2, min_points);
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    const auto pts = train.UserPoints(u);
    if (pts.empty()) continue;
    if (pts.size() < needed) {
      ranking.excluded_users.push_back(u);
      continue;
    }
    const auto positions = UserPositions(train, pts);
    ranking.per_user[u] = ToDatasetIndices(RankHardshipDensity(positions), pts);
  }
  return ranking;
}

AttributeRanking RankDatasetRating(const RatingDataset& train, Seed seed) {
  AttributeRanking ranking{"rating"};
  ranking.per_user.resize(train.num_users());
  for (std::uint32_t u = 0; u < train.num_users(); ++u) {
    const auto pts = train.UserPoints(u);
    if (pts.empty()) continue;
    std::vector<double> values;
    values.reserve(pts.size());
    for (std::uint32_t idx : pts) values.push_back(train[idx].value);
    ranking.per_user[u] =
        ToDatasetIndices(RankByRating(values, seed.Derive(u)), pts);
  }
  return ranking;
}

// ---------------------------------------------------------------------------
// Partitions

std::size_t ChunkPartition::CoveredPoints() const {
  std::size_t n = 0;
  for (const auto& c : chunks) n += c.size();
  return n;
}

std::vector<bool> ChunkPartition::Mask(std::size_t c) const {
  std::vector<bool> mask(n_points, false);
  for (std::uint32_t idx : chunks[c]) mask[idx] = true;
  return mask;
}

ChunkPartition PartitionDeciles(const AttributeRanking& ranking,
                                std::size_t n_chunks, std::size_t n_points) {
  if (n_chunks == 0) throw InvalidArgument("partition: n_chunks must be >= 1");
  ChunkPartition part;
  part.attribute = ranking.attribute;
  part.n_points = n_points;
  part.chunks.resize(n_chunks);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    part.labels.push_back(std::to_string(c + 1));
  }
  for (const RankingEntry& entry : ranking.per_user) {
    const std::size_t n = entry.size();
    const std::size_t base = n / n_chunks;
    const std::size_t extra = n % n_chunks;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t len = base + (c < extra ? 1 : 0);
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint32_t idx = entry[pos++].point;
        if (idx >= n_points) {
          throw InvalidArgument("partition: ranked point outside dataset");
        }
        part.chunks[c].push_back(idx);
      }
    }
  }
  for (auto& c : part.chunks) std::sort(c.begin(), c.end());
  return part;
}

// ---------------------------------------------------------------------------
// Time intervals

int TimeInterval::length() const {
  const int len = ((end_hour - start_hour) % 24 + 24) % 24;
  return len == 0 ? 24 : len;
}

bool TimeInterval::Contains(int hour) const {
  return ((hour - start_hour) % 24 + 24) % 24 < length();
}

std::uint32_t TimeInterval::HourMask() const {
  std::uint32_t mask = 0;
  for (int h = 0; h < 24; ++h) {
    if (Contains(h)) mask |= 1u << h;
  }
  return mask;
}

std::string TimeInterval::Label() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d-%02d", start_hour, end_hour % 24);
  return buf;
}

std::array<double, 24> HourlyMass(const CheckinDataset& ds) {
  std::array<double, 24> mass{};
  for (const CheckinPoint& p : ds.points()) {
    for (int h = 0; h < 24; ++h) {
      if (p.hour_mask & (1u << h)) mass[h] += 1.0;
    }
  }
  return mass;
}

namespace {

constexpr double kBandSlack = 1e-12;

struct Tiler {
  std::span<const double, 24> mass;
  double total;
  double min_frac;
  double max_frac;

  double Fraction(int start, int len) const {
    double sum = 0.0;
    for (int j = 0; j < len; ++j) sum += mass[(start + j) % 24];
    return sum / total;
  }

  bool InBand(double f) const {
    return f >= min_frac - kBandSlack && f <= max_frac + kBandSlack;
  }

  TimeInterval Make(int start, int len) const {
    TimeInterval t;
    t.start_hour = start % 24;
    t.end_hour = (start + len) % 24;
    t.fraction = Fraction(start, len);
    t.in_band = InBand(t.fraction);
    return t;
  }

  std::vector<TimeInterval> Greedy() const {
    std::vector<std::pair<int, int>> cuts;  // (start, len)
    int h = 0;
    while (h < 24) {
      const int start = h;
      double acc = 0.0;
      while (h < 24 && acc / total < min_frac - kBandSlack) acc += mass[h++];
      cuts.emplace_back(start, h - start);
    }
    if (cuts.size() > 1 &&
        Fraction(cuts.back().first, cuts.back().second) <
            min_frac - kBandSlack) {
      cuts[cuts.size() - 2].second += cuts.back().second;
      cuts.pop_back();
    }
    std::vector<TimeInterval> out;
    for (auto [start, len] : cuts) out.push_back(Make(start, len));
    return out;
  }

  // Depth-first search for an all-in-band tiling of the 24 hours starting
  // at `anchor`, shortest intervals first.
  bool Search(int anchor, int consumed, std::vector<int>& lens,
              std::array<bool, 25>& dead) const {
    if (consumed == 24) return true;
    if (dead[consumed]) return false;
    for (int len = 1; consumed + len <= 24; ++len) {
      const double f = Fraction(anchor + consumed, len);
      if (f > max_frac + kBandSlack) break;
      if (!InBand(f)) continue;
      lens.push_back(len);
      if (Search(anchor, consumed + len, lens, dead)) return true;
      lens.pop_back();
    }
    dead[consumed] = true;
    return false;
  }
};

}  // namespace

std::vector<TimeInterval> BuildTimeIntervals(
    std::span<const double, 24> hourly_mass, double min_frac,
    double max_frac) {
  if (!(min_frac > 0.0 && min_frac < max_frac && max_frac <= 1.0)) {
    throw InvalidArgument("time intervals: need 0 < min_frac < max_frac <= 1");
  }
  double total = 0.0;
  for (double m : hourly_mass) {
    if (!(m >= 0.0)) throw InvalidArgument("time intervals: negative mass");
    total += m;
  }
  if (!(total > 0.0)) throw InvalidArgument("time intervals: empty dataset");

  const Tiler tiler{hourly_mass, total, min_frac, max_frac};
  std::vector<TimeInterval> greedy = tiler.Greedy();
  if (std::all_of(greedy.begin(), greedy.end(),
                  [](const TimeInterval& t) { return t.in_band; })) {
    return greedy;
  }
  for (int anchor = 0; anchor < 24; ++anchor) {
    std::vector<int> lens;
    std::array<bool, 25> dead{};
    if (tiler.Search(anchor, 0, lens, dead)) {
      std::vector<TimeInterval> out;
      int start = anchor;
      for (int len : lens) {
        out.push_back(tiler.Make(start, len));
        start += len;
      }
      return out;
    }
  }
  return greedy;
}

std::vector<TimeInterval> BuildTimeIntervals(const CheckinDataset& ds,
                                             double min_frac,
                                             double max_frac) {
  const std::array<double, 24> mass = HourlyMass(ds);
  return BuildTimeIntervals(std::span<const double, 24>(mass), min_frac,
                            max_frac);
}

ChunkPartition TimePartition(const CheckinDataset& train,
                             std::span<const TimeInterval> intervals) {
  ChunkPartition part;
  part.attribute = "time";
  part.n_points = train.size();
  part.chunks.resize(intervals.size());
  std::vector<std::uint32_t> masks;
  for (const TimeInterval& t : intervals) {
    part.labels.push_back(t.Label());
    masks.push_back(t.HourMask());
  }
  for (std::uint32_t i = 0; i < train.size(); ++i) {
    const std::uint32_t visits = train[i].hour_mask;
    if (visits == 0) continue;
    for (std::size_t c = 0; c < masks.size(); ++c) {
      if ((visits & ~masks[c]) == 0) {
        part.chunks[c].push_back(i);
        break;
      }
    }
  }
  return part;
}

}  // namespace dda::attributes
