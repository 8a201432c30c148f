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

#ifndef DDA_ATTRIBUTES_H_
#define DDA_ATTRIBUTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dda/dataset.h"
#include "dda/geo.h"
#include "dda/seed.h"

namespace dda::attributes {

struct RankedPoint {
  std::uint32_t point = 0;  // index into the ranked collection
  double score = 0.0;
};

// One user's points in rank order (scores non-decreasing).
using RankingEntry = std::vector<RankedPoint>;

struct AttributeRanking {
  std::string attribute;
  // Indexed by user; `point` refers to positions in the ranked dataset.
  std::vector<RankingEntry> per_user;
  // Users left unranked because they have too few points.
  std::vector<std::uint32_t> excluded_users;
};

inline constexpr std::size_t kDefaultMinPoints = 5;

// Score = minimum haversine distance to the user's k KMeans centroids.
// Entries index into `points`.
RankingEntry RankHardshipKMeans(std::span<const geo::GeoPoint> points,
                                std::size_t k, Seed seed);

// Score = haversine distance to the nearest other point of the same user.
// Requires at least two points.
RankingEntry RankHardshipDensity(std::span<const geo::GeoPoint> points);

// Ascending by value; equal values appear in a seeded uniformly random
// order.
RankingEntry RankByRating(std::span<const double> values, Seed seed);

// Dataset-level rankings. Users with fewer than max(k, min_points) points
// (KMeans) or max(2, min_points) points (Density) are excluded.
AttributeRanking RankDatasetKMeans(const CheckinDataset& train, std::size_t k,
                                   std::size_t min_points, Seed seed);
AttributeRanking RankDatasetDensity(const CheckinDataset& train,
                                    std::size_t min_points);
AttributeRanking RankDatasetRating(const RatingDataset& train, Seed seed);

// Ordered chunks of point indices into one dataset. Decile partitions are
// disjoint and cover every ranked point; time partitions only hold points
// whose every visit lies inside the interval.
struct ChunkPartition {
  std::string attribute;
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> chunks;  // each ascending
  std::size_t n_points = 0;  // size of the partitioned dataset

  std::size_t size() const { return chunks.size(); }
  std::size_t CoveredPoints() const;
  // Membership mask of chunk c over the partitioned dataset.
  std::vector<bool> Mask(std::size_t c) const;
};

// Per user, slices the ranking into n_chunks contiguous pieces; the first
// (n mod n_chunks) pieces get one extra point.
ChunkPartition PartitionDeciles(const AttributeRanking& ranking,
                                std::size_t n_chunks, std::size_t n_points);

// Half-open [start_hour, end_hour) on a 24-hour clock; wraps midnight when
// end_hour <= start_hour.
struct TimeInterval {
  int start_hour = 0;
  int end_hour = 0;
  double fraction = 0.0;  // share of the hourly mass inside
  bool in_band = true;    // fraction within [min_frac, max_frac]

  int length() const;
  bool Contains(int hour) const;
  std::uint32_t HourMask() const;
  std::string Label() const;
};

// Visit mass per local hour: one unit per (point, visited hour).
std::array<double, 24> HourlyMass(const CheckinDataset& ds);

// Tiles the day into consecutive intervals each holding between min_frac
// and max_frac of the mass. Greedy from hour 0: hours accumulate until the
// interval reaches min_frac; a short tail merges into the previous
// interval. When the greedy cut leaves an interval out of band, a search
// over other cut points (and other starting hours, wrapping midnight)
// looks for an all-in-band tiling; if none exists the greedy tiling is
// returned with out-of-band intervals flagged.
std::vector<TimeInterval> BuildTimeIntervals(
    std::span<const double, 24> hourly_mass, double min_frac = 0.10,
    double max_frac = 0.15);
std::vector<TimeInterval> BuildTimeIntervals(const CheckinDataset& ds,
                                             double min_frac = 0.10,
                                             double max_frac = 0.15);

// Chunk c = points of `train` whose every visited hour lies in interval c.
ChunkPartition TimePartition(const CheckinDataset& train,
                             std::span<const TimeInterval> intervals);

}  // namespace dda::attributes

#endif  // DDA_ATTRIBUTES_H_
