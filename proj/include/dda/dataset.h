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

#ifndef DDA_DATASET_H_
#define DDA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dda/geo.h"
#include "dda/seed.h"

namespace dda {

// Wall-clock time in the user's local zone; no zone information is kept.
struct LocalTime {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Accepts "YYYY-MM-DDTHH:MM[:SS]" with 'T' or ' ' as separator.
std::optional<LocalTime> ParseLocalTime(std::string_view text);
std::string FormatLocalTime(const LocalTime& t);

// One raw visit record, as it appears in a checkin file.
struct Checkin {
  std::string user_id;
  std::string location_id;
  geo::GeoPoint position;
  LocalTime local_time;
};

// One raw rating record.
struct Rating {
  std::string user_id;
  std::string item_id;
  double value = 0.0;
  std::int64_t timestamp = 0;
};

// Interned user and item identifiers shared by a dataset and everything
// derived from it (splits, subsets, fakes), so indices agree across them.
class Catalog {
 public:
  std::uint32_t InternUser(std::string_view id);
  std::uint32_t InternItem(std::string_view id);
  std::uint32_t InternLocation(std::string_view id,
                               const geo::GeoPoint& position);

  std::size_t num_users() const { return user_ids_.size(); }
  std::size_t num_items() const { return item_ids_.size(); }

  const std::string& user_id(std::uint32_t u) const { return user_ids_[u]; }
  const std::string& item_id(std::uint32_t i) const { return item_ids_[i]; }

  std::optional<std::uint32_t> FindUser(std::string_view id) const;
  std::optional<std::uint32_t> FindItem(std::string_view id) const;

  // Locations carry coordinates; rating items do not.
  bool has_positions() const {
    return !item_positions_.empty() && item_positions_.size() == num_items();
  }
  const geo::GeoPoint& position(std::uint32_t i) const {
    return item_positions_[i];
  }
  std::span<const geo::GeoPoint> positions() const { return item_positions_; }

 private:
  std::vector<std::string> user_ids_;
  std::unordered_map<std::string, std::uint32_t> user_index_;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, std::uint32_t> item_index_;
  std::vector<geo::GeoPoint> item_positions_;
};

// A binary (user, location) rating: every visit of the user to the location
// collapses into one point. `hour_mask` bit h is set iff some visit fell in
// local hour h. The visit count is not kept.
struct CheckinPoint {
  std::uint32_t user = 0;
  std::uint32_t item = 0;
  std::uint32_t hour_mask = 0;

  friend bool operator==(const CheckinPoint&, const CheckinPoint&) = default;
};

struct RatingPoint {
  std::uint32_t user = 0;
  std::uint32_t item = 0;
  double value = 0.0;
  std::int64_t timestamp = 0;

  friend bool operator==(const RatingPoint&, const RatingPoint&) = default;
};

// Immutable collection of points with per-user and per-item indexes.
// Index lists hold point positions in ascending order.
template <class Point>
class Dataset {
 public:
  using point_type = Point;

  Dataset() : catalog_(std::make_shared<const Catalog>()) { BuildIndexes(); }
  Dataset(std::shared_ptr<const Catalog> catalog, std::vector<Point> points)
      : catalog_(std::move(catalog)), points_(std::move(points)) {
    BuildIndexes();
  }

  const Catalog& catalog() const { return *catalog_; }
  const std::shared_ptr<const Catalog>& shared_catalog() const {
    return catalog_;
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Point> points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  std::size_t num_users() const { return catalog_->num_users(); }
  std::size_t num_items() const { return catalog_->num_items(); }

  std::span<const std::uint32_t> UserPoints(std::uint32_t user) const {
    return Slice(user_offsets_, user_index_, user);
  }
  std::span<const std::uint32_t> ItemPoints(std::uint32_t item) const {
    return Slice(item_offsets_, item_index_, item);
  }

  // Users with at least one point, ascending.
  std::vector<std::uint32_t> ActiveUsers() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t u = 0; u < num_users(); ++u) {
      if (!UserPoints(u).empty()) out.push_back(u);
    }
    return out;
  }

  // Items with at least one point, ascending.
  std::vector<std::uint32_t> DistinctItems() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < num_items(); ++i) {
      if (!ItemPoints(i).empty()) out.push_back(i);
    }
    return out;
  }

  Dataset Select(std::span<const std::uint32_t> indices) const {
    std::vector<Point> out;
    out.reserve(indices.size());
    for (std::uint32_t i : indices) out.push_back(points_[i]);
    return Dataset(catalog_, std::move(out));
  }

  // Keeps points whose `removed` flag is false.
  Dataset Without(const std::vector<bool>& removed) const {
    std::vector<Point> out;
    out.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!removed[i]) out.push_back(points_[i]);
    }
    return Dataset(catalog_, std::move(out));
  }

  Dataset Concat(std::span<const Point> extra) const {
    std::vector<Point> out(points_);
    out.insert(out.end(), extra.begin(), extra.end());
    return Dataset(catalog_, std::move(out));
  }

 private:
  static std::span<const std::uint32_t> Slice(
      const std::vector<std::uint32_t>& offsets,
      const std::vector<std::uint32_t>& index, std::uint32_t key) {
    if (key + 1 >= offsets.size()) return {};
    return std::span<const std::uint32_t>(index).subspan(
        offsets[key], offsets[key + 1] - offsets[key]);
  }

  template <class KeyFn>
  void BuildCsr(std::size_t n_keys, KeyFn key,
                std::vector<std::uint32_t>& offsets,
                std::vector<std::uint32_t>& index) const {
    offsets.assign(n_keys + 1, 0);
    for (const Point& p : points_) ++offsets[key(p) + 1];
    for (std::size_t k = 0; k < n_keys; ++k) offsets[k + 1] += offsets[k];
    index.assign(points_.size(), 0);
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      index[cursor[key(points_[i])]++] = static_cast<std::uint32_t>(i);
    }
  }

  void BuildIndexes() {
    BuildCsr(catalog_->num_users(), [](const Point& p) { return p.user; },
             user_offsets_, user_index_);
    BuildCsr(catalog_->num_items(), [](const Point& p) { return p.item; },
             item_offsets_, item_index_);
  }

  std::shared_ptr<const Catalog> catalog_;
  std::vector<Point> points_;
  std::vector<std::uint32_t> user_offsets_;
  std::vector<std::uint32_t> user_index_;
  std::vector<std::uint32_t> item_offsets_;
  std::vector<std::uint32_t> item_index_;
};

using CheckinDataset = Dataset<CheckinPoint>;
using RatingDataset = Dataset<RatingPoint>;

// ---------------------------------------------------------------------------
// File formats.

// CSV with header `user_id,location_id,lat,lon,local_time`. Repeated visits
// to a location collapse into one point. Errors name the offending line.
CheckinDataset ParseCheckins(std::istream& in, std::string_view source);
CheckinDataset LoadCheckins(const std::filesystem::path& path);
CheckinDataset CheckinsFromRecords(std::span<const Checkin> records);

// One row per (point, visited hour); the date part is a placeholder since
// only the hour of each visit is retained.
void WriteCheckinsCsv(const CheckinDataset& ds, std::ostream& out);

// MovieLens 1M: `UserID::MovieID::Rating::Timestamp`, stars in [1, 5].
RatingDataset ParseMovieLens(std::istream& in, std::string_view source);
RatingDataset LoadMovieLens(const std::filesystem::path& path);

// CSV with header `user_id,item_id,value,timestamp`; values are real.
RatingDataset ParseRatingsCsv(std::istream& in, std::string_view source);
RatingDataset LoadRatingsCsv(const std::filesystem::path& path);
void WriteRatingsCsv(const RatingDataset& ds, std::ostream& out);

// Stable content hash over catalog ids and points.
std::uint64_t ContentHash(const CheckinDataset& ds);
std::uint64_t ContentHash(const RatingDataset& ds);

// ---------------------------------------------------------------------------
// Splits.

template <class Point>
struct SplitPair {
  Dataset<Point> train;
  Dataset<Point> test;
  Seed seed{0};
};

// Moves floor(n * test_fraction) of each user's points, chosen uniformly
// without replacement, into the test set.
template <class Point>
SplitPair<Point> HoldoutSplit(const Dataset<Point>& ds, double test_fraction,
                              Seed seed);

// Partitions the active users uniformly at random into two halves whose
// sizes differ by at most one. Each half keeps all of its users' points.
template <class Point>
std::pair<Dataset<Point>, Dataset<Point>> HalfSplit(const Dataset<Point>& ds,
                                                    Seed seed);

// Partitions the active users into `n_groups` disjoint groups of sizes
// differing by at most one.
template <class Point>
std::vector<Dataset<Point>> SplitUsers(const Dataset<Point>& ds,
                                       std::size_t n_groups, Seed seed);

// Per-user fold assignment: each user's points are shuffled and dealt into
// `n_folds` contiguous pieces of sizes differing by at most one. Returns
// the fold of every point.
template <class Point>
std::vector<std::uint32_t> AssignFolds(const Dataset<Point>& ds,
                                       std::size_t n_folds, Seed seed);

// ---------------------------------------------------------------------------
// Synthetic data.

// Draws U (n_users x n_factors) and V (n_items x n_factors) with iid
// standard normal entries and returns the entries of U V^T at n_ratings
// distinct positions sampled uniformly without replacement. Timestamps 0.
RatingDataset GenerateSynthetic(std::size_t n_users, std::size_t n_items,
                                std::size_t n_factors, std::size_t n_ratings,
                                Seed seed);

// A clustered synthetic city of checkins. Locations concentrate in
// neighbourhoods; every user lives in one neighbourhood and works in
// another, visits popular places in both, and makes a fraction of
// far-flung visits to arbitrary places, mostly late at night.
struct CityParams {
  std::size_t n_users = 500;
  std::size_t n_locations = 2000;
  std::size_t n_neighborhoods = 20;
  geo::GeoPoint center{30.2672, -97.7431};
  double city_radius_km = 20.0;
  double neighborhood_radius_km = 1.0;
  double scattered_location_fraction = 0.1;
  std::size_t min_points = 20;
  std::size_t max_points = 60;
  double far_fraction = 0.2;
  double home_share = 0.6;
  // Zipf exponent of location popularity within a neighbourhood.
  double popularity_exponent = 1.0;
};

CheckinDataset GenerateCity(const CityParams& params, Seed seed);

}  // namespace dda

#endif  // DDA_DATASET_H_
