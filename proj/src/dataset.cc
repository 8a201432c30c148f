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

#include "dda/dataset.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dda/error.h"

namespace dda {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitOn(std::string_view line,
                                      std::string_view delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, pos - start)));
    start = pos + delim.size();
  }
}

template <class T>
bool ParseNumber(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string Where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  return in;
}

// "%.17g" round-trips doubles and is locale-independent for our inputs.
std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::optional<LocalTime> ParseLocalTime(std::string_view text) {
  text = Trim(text);
  LocalTime t;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    return pos + len <= text.size() &&
           ParseNumber(text.substr(pos, len), out);
  };
  if (text.size() < 16) return std::nullopt;
  if (!field(0, 4, t.year) || text[4] != '-' || !field(5, 2, t.month) ||
      text[7] != '-' || !field(8, 2, t.day) ||
      (text[10] != 'T' && text[10] != ' ') || !field(11, 2, t.hour) ||
      text[13] != ':' || !field(14, 2, t.minute)) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(16);
  if (!rest.empty()) {
    if (rest.size() < 3 || rest[0] != ':' || !field(17, 2, t.second)) {
      return std::nullopt;
    }
    rest = rest.substr(3);
    // Fractional seconds are accepted and dropped.
    if (!rest.empty()) {
      if (rest[0] != '.') return std::nullopt;
      for (char c : rest.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
      }
    }
  }
  if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > 31 || t.hour < 0 ||
      t.hour > 23 || t.minute < 0 || t.minute > 59 || t.second < 0 ||
      t.second > 60) {
    return std::nullopt;
  }
  return t;
}

std::string FormatLocalTime(const LocalTime& t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", t.year,
                t.month, t.day, t.hour, t.minute, t.second);
  return buf;
}

// ---------------------------------------------------------------------------
// Catalog

std::uint32_t Catalog::InternUser(std::string_view id) {
  auto [it, inserted] = user_index_.try_emplace(
      std::string(id), static_cast<std::uint32_t>(user_ids_.size()));
  if (inserted) user_ids_.emplace_back(id);
  return it->second;
}

std::uint32_t Catalog::InternItem(std::string_view id) {
  auto [it, inserted] = item_index_.try_emplace(
      std::string(id), static_cast<std::uint32_t>(item_ids_.size()));
  if (inserted) item_ids_.emplace_back(id);
  return it->second;
}

std::uint32_t Catalog::InternLocation(std::string_view id,
                                      const geo::GeoPoint& position) {
  const std::uint32_t index = InternItem(id);
  // A location keeps the coordinates of its first occurrence.
  if (index == item_positions_.size()) item_positions_.push_back(position);
  return index;
}

std::optional<std::uint32_t> Catalog::FindUser(std::string_view id) const {
  auto it = user_index_.find(std::string(id));
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Catalog::FindItem(std::string_view id) const {
  auto it = item_index_.find(std::string(id));
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Checkins

namespace {

class CheckinAccumulator {
 public:
  void Add(std::string_view user_id, std::string_view location_id,
           const geo::GeoPoint& position, int hour) {
    const std::uint32_t u = catalog_->InternUser(user_id);
    const std::uint32_t l = catalog_->InternLocation(location_id, position);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | l;
    auto [it, inserted] = slot_.try_emplace(key, points_.size());
    if (inserted) points_.push_back(CheckinPoint{u, l, 0});
    points_[it->second].hour_mask |= 1u << hour;
  }

  CheckinDataset Finish() {
    return CheckinDataset(std::move(catalog_), std::move(points_));
  }

 private:
  std::shared_ptr<Catalog> catalog_ = std::make_shared<Catalog>();
  std::unordered_map<std::uint64_t, std::size_t> slot_;
  std::vector<CheckinPoint> points_;
};

}  // namespace

CheckinDataset ParseCheckins(std::istream& in, std::string_view source) {
  CheckinAccumulator acc;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (Trim(view).empty()) continue;
    const auto fields = SplitOn(view, ",");
    if (!header_seen) {
      if (fields.size() != 5 || fields[0] != "user_id" ||
          fields[1] != "location_id" || fields[2] != "lat" ||
          fields[3] != "lon" || fields[4] != "local_time") {
        throw DatasetError(
            Where(source, line_no) +
            ": expected header user_id,location_id,lat,lon,local_time");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw DatasetError(Where(source, line_no) + ": expected 5 fields, got " +
                         std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw DatasetError(Where(source, line_no) + ": empty identifier");
    }
    geo::GeoPoint pos;
    if (!ParseNumber(fields[2], pos.lat) || !ParseNumber(fields[3], pos.lon)) {
      throw DatasetError(Where(source, line_no) + ": bad coordinate");
    }
    if (!geo::InBounds(pos)) {
      throw DatasetError(Where(source, line_no) +
                         ": coordinate out of bounds (lat " +
                         std::string(fields[2]) + ", lon " +
                         std::string(fields[3]) + ")");
    }
    const auto time = ParseLocalTime(fields[4]);
    if (!time) {
      throw DatasetError(Where(source, line_no) + ": bad local_time '" +
                         std::string(fields[4]) + "'");
    }
    acc.Add(fields[0], fields[1], pos, time->hour);
  }
  return acc.Finish();
}

CheckinDataset LoadCheckins(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseCheckins(in, path.string());
}

CheckinDataset CheckinsFromRecords(std::span<const Checkin> records) {
  CheckinAccumulator acc;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Checkin& c = records[i];
    if (!geo::InBounds(c.position)) {
      throw DatasetError("checkin record " + std::to_string(i) +
                         ": coordinate out of bounds");
    }
    if (c.local_time.hour < 0 || c.local_time.hour > 23) {
      throw DatasetError("checkin record " + std::to_string(i) +
                         ": hour out of range");
    }
    acc.Add(c.user_id, c.location_id, c.position, c.local_time.hour);
  }
  return acc.Finish();
}

void WriteCheckinsCsv(const CheckinDataset& ds, std::ostream& out) {
  const Catalog& cat = ds.catalog();
  out << "user_id,location_id,lat,lon,local_time\n";
  for (const CheckinPoint& p : ds.points()) {
    const geo::GeoPoint& pos = cat.position(p.item);
    for (int h = 0; h < 24; ++h) {
      if (!(p.hour_mask & (1u << h))) continue;
      LocalTime t;
      t.hour = h;
      out << cat.user_id(p.user) << ',' << cat.item_id(p.item) << ','
          << FormatDouble(pos.lat) << ',' << FormatDouble(pos.lon) << ','
          << FormatLocalTime(t) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Ratings

RatingDataset ParseMovieLens(std::istream& in, std::string_view source) {
  auto catalog = std::make_shared<Catalog>();
  std::vector<RatingPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitOn(line, "::");
    if (fields.size() != 4) {
      throw DatasetError(Where(source, line_no) +
                         ": expected UserID::MovieID::Rating::Timestamp");
    }
    int stars = 0;
    std::int64_t ts = 0;
    if (fields[0].empty() || fields[1].empty() ||
        !ParseNumber(fields[2], stars) || !ParseNumber(fields[3], ts)) {
      throw DatasetError(Where(source, line_no) + ": malformed row");
    }
    if (stars < 1 || stars > 5) {
      throw DatasetError(Where(source, line_no) + ": rating " +
                         std::to_string(stars) + " outside [1, 5]");
    }
    points.push_back(RatingPoint{catalog->InternUser(fields[0]),
                                 catalog->InternItem(fields[1]),
                                 static_cast<double>(stars), ts});
  }
  return RatingDataset(std::move(catalog), std::move(points));
}

RatingDataset LoadMovieLens(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseMovieLens(in, path.string());
}

RatingDataset ParseRatingsCsv(std::istream& in, std::string_view source) {
  auto catalog = std::make_shared<Catalog>();
  std::vector<RatingPoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitOn(line, ",");
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "user_id" ||
          fields[1] != "item_id" || fields[2] != "value" ||
          fields[3] != "timestamp") {
        throw DatasetError(Where(source, line_no) +
                           ": expected header user_id,item_id,value,timestamp");
      }
      header_seen = true;
      continue;
    }
    double value = 0.0;
    std::int64_t ts = 0;
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() ||
        !ParseNumber(fields[2], value) || !std::isfinite(value) ||
        !ParseNumber(fields[3], ts)) {
      throw DatasetError(Where(source, line_no) + ": malformed row");
    }
    points.push_back(RatingPoint{catalog->InternUser(fields[0]),
                                 catalog->InternItem(fields[1]), value, ts});
  }
  return RatingDataset(std::move(catalog), std::move(points));
}

RatingDataset LoadRatingsCsv(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseRatingsCsv(in, path.string());
}

void WriteRatingsCsv(const RatingDataset& ds, std::ostream& out) {
  const Catalog& cat = ds.catalog();
  out << "user_id,item_id,value,timestamp\n";
  for (const RatingPoint& p : ds.points()) {
    out << cat.user_id(p.user) << ',' << cat.item_id(p.item) << ','
        << FormatDouble(p.value) << ',' << p.timestamp << '\n';
  }
}

namespace {

template <class Point, class PointBytes>
std::uint64_t HashDataset(const Dataset<Point>& ds, PointBytes bytes) {
  std::uint64_t h = Fnv1a64("dda-dataset");
  const Catalog& cat = ds.catalog();
  for (const Point& p : ds.points()) {
    h = Fnv1a64(cat.user_id(p.user), h);
    h = Fnv1a64("\x1f", h);
    h = Fnv1a64(cat.item_id(p.item), h);
    h = Fnv1a64("\x1f", h);
    h = Fnv1a64(bytes(p), h);
    h = Fnv1a64("\x1e", h);
  }
  return h;
}

}  // namespace

std::uint64_t ContentHash(const CheckinDataset& ds) {
  return HashDataset(ds, [](const CheckinPoint& p) {
    return std::to_string(p.hour_mask);
  });
}

std::uint64_t ContentHash(const RatingDataset& ds) {
  return HashDataset(ds, [](const RatingPoint& p) {
    return FormatDouble(p.value) + "@" + std::to_string(p.timestamp);
  });
}

// ---------------------------------------------------------------------------
// Splits

namespace {

template <class T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  // Explicit Fisher-Yates: std::shuffle's draw sequence is unspecified.
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[UniformIndex(rng, i)]);
  }
}

}  // namespace

template <class Point>
SplitPair<Point> HoldoutSplit(const Dataset<Point>& ds, double test_fraction,
                              Seed seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("holdout_split: test_fraction must be in (0, 1)");
  }
  std::mt19937_64 rng = seed.Derive("holdout").Engine();
  std::vector<bool> in_test(ds.size(), false);
  for (std::uint32_t u = 0; u < ds.num_users(); ++u) {
    const auto pts = ds.UserPoints(u);
    const auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(pts.size()) * test_fraction));
    if (n_test == 0) continue;
    std::vector<std::uint32_t> order(pts.begin(), pts.end());
    // Partial Fisher-Yates: the first n_test slots are a uniform sample.
    for (std::size_t i = 0; i < n_test; ++i) {
      const std::size_t j = i + UniformIndex(rng, order.size() - i);
      std::swap(order[i], order[j]);
      in_test[order[i]] = true;
    }
  }
  std::vector<Point> train;
  std::vector<Point> test;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (in_test[i] ? test : train).push_back(ds[i]);
  }
  return SplitPair<Point>{Dataset<Point>(ds.shared_catalog(), std::move(train)),
                          Dataset<Point>(ds.shared_catalog(), std::move(test)),
                          seed};
}

template <class Point>
std::vector<Dataset<Point>> SplitUsers(const Dataset<Point>& ds,
                                       std::size_t n_groups, Seed seed) {
  std::vector<std::uint32_t> users = ds.ActiveUsers();
  if (n_groups == 0) throw InvalidArgument("split_users: n_groups must be >= 1");
  if (users.size() < n_groups) {
    throw InvalidArgument("split_users: " + std::to_string(users.size()) +
                          " users cannot form " + std::to_string(n_groups) +
                          " groups");
  }
  std::mt19937_64 rng = seed.Derive("split-users").Engine();
  Shuffle(users, rng);
  std::vector<std::uint32_t> group_of(ds.num_users(), 0);
  for (std::size_t i = 0; i < users.size(); ++i) {
    group_of[users[i]] = static_cast<std::uint32_t>(i % n_groups);
  }
  std::vector<std::vector<Point>> parts(n_groups);
  for (const Point& p : ds.points()) parts[group_of[p.user]].push_back(p);
  std::vector<Dataset<Point>> out;
  out.reserve(n_groups);
  for (auto& part : parts) out.emplace_back(ds.shared_catalog(), std::move(part));
  return out;
}

template <class Point>
std::pair<Dataset<Point>, Dataset<Point>> HalfSplit(const Dataset<Point>& ds,
                                                    Seed seed) {
  if (ds.ActiveUsers().size() < 2) {
    throw InvalidArgument("half_split: need at least 2 users");
  }
  auto groups = SplitUsers(ds, 2, seed.Derive("half"));
  return {std::move(groups[0]), std::move(groups[1])};
}

template <class Point>
std::vector<std::uint32_t> AssignFolds(const Dataset<Point>& ds,
                                       std::size_t n_folds, Seed seed) {
  if (n_folds < 2) throw InvalidArgument("assign_folds: need >= 2 folds");
  std::mt19937_64 rng = seed.Derive("folds").Engine();
  std::vector<std::uint32_t> fold(ds.size(), 0);
  for (std::uint32_t u = 0; u < ds.num_users(); ++u) {
    const auto pts = ds.UserPoints(u);
    std::vector<std::uint32_t> order(pts.begin(), pts.end());
    Shuffle(order, rng);
    const std::size_t n = order.size();
    const std::size_t base = n / n_folds;
    const std::size_t extra = n % n_folds;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < n_folds; ++f) {
      const std::size_t len = base + (f < extra ? 1 : 0);
      for (std::size_t j = 0; j < len; ++j) {
        fold[order[pos++]] = static_cast<std::uint32_t>(f);
      }
    }
  }
  return fold;
}

template SplitPair<CheckinPoint> HoldoutSplit(const CheckinDataset&, double,
                                              Seed);
template SplitPair<RatingPoint> HoldoutSplit(const RatingDataset&, double,
                                             Seed);
template std::pair<CheckinDataset, CheckinDataset> HalfSplit(
    const CheckinDataset&, Seed);
template std::pair<RatingDataset, RatingDataset> HalfSplit(
    const RatingDataset&, Seed);
template std::vector<CheckinDataset> SplitUsers(const CheckinDataset&,
                                                std::size_t, Seed);
template std::vector<RatingDataset> SplitUsers(const RatingDataset&,
                                               std::size_t, Seed);
template std::vector<std::uint32_t> AssignFolds(const CheckinDataset&,
                                                std::size_t, Seed);
template std::vector<std::uint32_t> AssignFolds(const RatingDataset&,
                                                std::size_t, Seed);

// ---------------------------------------------------------------------------
// Synthetic ratings

RatingDataset GenerateSynthetic(std::size_t n_users, std::size_t n_items,
                                std::size_t n_factors, std::size_t n_ratings,
                                Seed seed) {
  if (n_users == 0 || n_items == 0 || n_factors == 0) {
    throw InvalidArgument("generate_synthetic: dimensions must be positive");
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(n_users) * n_items;
  if (n_ratings > cells) {
    throw InvalidArgument("generate_synthetic: " + std::to_string(n_ratings) +
                          " ratings exceed the " + std::to_string(cells) +
                          " cells of the rating matrix");
  }
  std::mt19937_64 factor_rng = seed.Derive("factors").Engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(n_users * n_factors);
  std::vector<double> v(n_items * n_factors);
  for (double& x : u) x = normal(factor_rng);
  for (double& x : v) x = normal(factor_rng);

  auto catalog = std::make_shared<Catalog>();
  for (std::size_t i = 0; i < n_users; ++i) {
    catalog->InternUser(std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < n_items; ++i) {
    catalog->InternItem(std::to_string(i + 1));
  }

  // Selection sampling (Knuth's Algorithm S): each cell is kept with
  // probability needed / remaining, giving a uniform n-subset in row-major
  // order.
  std::mt19937_64 pick_rng = seed.Derive("positions").Engine();
  std::vector<RatingPoint> points;
  points.reserve(n_ratings);
  std::uint64_t needed = n_ratings;
  for (std::uint64_t cell = 0; cell < cells && needed > 0; ++cell) {
    const std::uint64_t remaining = cells - cell;
    if (UniformIndex(pick_rng, remaining) < needed) {
      const auto user = static_cast<std::uint32_t>(cell / n_items);
      const auto item = static_cast<std::uint32_t>(cell % n_items);
      double value = 0.0;
      for (std::size_t f = 0; f < n_factors; ++f) {
        value += u[user * n_factors + f] * v[item * n_factors + f];
      }
      points.push_back(RatingPoint{user, item, value, 0});
      --needed;
    }
  }
  return RatingDataset(std::move(catalog), std::move(points));
}

// ---------------------------------------------------------------------------
// Synthetic city

namespace {

constexpr double kKmPerDegLat = 111.195;

geo::GeoPoint Offset(const geo::GeoPoint& origin, double north_km,
                     double east_km) {
  const double cos_lat = std::cos(origin.lat * std::numbers::pi / 180.0);
  return geo::GeoPoint{origin.lat + north_km / kKmPerDegLat,
                       origin.lon + east_km / (kKmPerDegLat * cos_lat)};
}

geo::GeoPoint UniformInDisc(const geo::GeoPoint& center, double radius_km,
                            std::mt19937_64& rng) {
  const double r = radius_km * std::sqrt(UniformUnit(rng));
  const double theta = 2.0 * std::numbers::pi * UniformUnit(rng);
  return Offset(center, r * std::cos(theta), r * std::sin(theta));
}

// Hour-of-day profiles, relative weights.
constexpr std::array<double, 24> kHomeHours = {
    0.5, 0.2, 0.1, 0.1, 0.1, 0.3, 2, 3, 3, 2, 2, 3,
    4, 3, 3, 3, 4, 5, 6, 7, 7, 6, 4, 2};
constexpr std::array<double, 24> kWorkHours = {
    0.2, 0.1, 0.1, 0.1, 0.1, 0.5, 2, 5, 7, 7, 6, 7,
    8, 7, 6, 6, 6, 4, 2, 1, 1, 0.5, 0.5, 0.3};
constexpr std::array<double, 24> kFarHours = {
    5, 6, 6, 5, 1, 0.5, 0.3, 0.3, 0.5, 0.5, 0.5, 1,
    1, 1, 1, 1, 1, 1, 1, 1, 1.5, 2, 3, 4};

int DrawHour(const std::array<double, 24>& profile, std::mt19937_64& rng) {
  std::discrete_distribution<int> dist(profile.begin(), profile.end());
  return dist(rng);
}

}  // namespace

CheckinDataset GenerateCity(const CityParams& params, Seed seed) {
  if (params.n_neighborhoods < 2) {
    throw InvalidArgument("generate_city: need at least 2 neighbourhoods");
  }
  if (params.n_locations < params.n_neighborhoods || params.n_users == 0) {
    throw InvalidArgument("generate_city: too few locations or users");
  }
  if (params.min_points == 0 || params.max_points < params.min_points) {
    throw InvalidArgument("generate_city: bad points-per-user range");
  }
  std::mt19937_64 rng = seed.Derive("city").Engine();

  std::vector<geo::GeoPoint> hoods;
  for (std::size_t h = 0; h < params.n_neighborhoods; ++h) {
    hoods.push_back(UniformInDisc(params.center, params.city_radius_km, rng));
  }

  // Locations: most belong to a neighbourhood (Gaussian scatter around its
  // centre), the rest are spread over the whole city.
  std::normal_distribution<double> scatter(0.0, params.neighborhood_radius_km);
  std::vector<geo::GeoPoint> loc_pos(params.n_locations);
  std::vector<std::vector<std::uint32_t>> hood_locs(params.n_neighborhoods);
  for (std::uint32_t l = 0; l < params.n_locations; ++l) {
    if (l < params.n_neighborhoods ||
        UniformUnit(rng) >= params.scattered_location_fraction) {
      const std::size_t h = l < params.n_neighborhoods
                                ? l
                                : UniformIndex(rng, params.n_neighborhoods);
      loc_pos[l] = Offset(hoods[h], scatter(rng), scatter(rng));
      hood_locs[h].push_back(l);
    } else {
      loc_pos[l] = UniformInDisc(params.center, params.city_radius_km, rng);
    }
  }

  // Popularity within a neighbourhood falls off with distance rank from
  // the centre (Zipf), so the core of a neighbourhood is shared by many of
  // its residents.
  std::vector<std::vector<double>> hood_weights(params.n_neighborhoods);
  for (std::size_t h = 0; h < params.n_neighborhoods; ++h) {
    auto& locs = hood_locs[h];
    std::sort(locs.begin(), locs.end(), [&](std::uint32_t a, std::uint32_t b) {
      return geo::HaversineKm(loc_pos[a], hoods[h]) <
             geo::HaversineKm(loc_pos[b], hoods[h]);
    });
    for (std::size_t r = 0; r < locs.size(); ++r) {
      hood_weights[h].push_back(
          1.0 / std::pow(static_cast<double>(r + 1),
                         params.popularity_exponent));
    }
  }

  std::vector<Checkin> records;
  char id_buf[32];
  for (std::size_t u = 0; u < params.n_users; ++u) {
    std::snprintf(id_buf, sizeof(id_buf), "u%05zu", u);
    const std::string user_id = id_buf;
    const std::size_t home = UniformIndex(rng, params.n_neighborhoods);
    std::size_t work = UniformIndex(rng, params.n_neighborhoods - 1);
    if (work >= home) ++work;
    const std::size_t n_points =
        params.min_points +
        UniformIndex(rng, params.max_points - params.min_points + 1);
    const auto n_far = static_cast<std::size_t>(
        std::lround(params.far_fraction * static_cast<double>(n_points)));
    const std::size_t n_near = n_points - n_far;
    const auto n_home = static_cast<std::size_t>(
        std::lround(params.home_share * static_cast<double>(n_near)));

    std::vector<bool> taken(params.n_locations, false);
    auto emit = [&](std::uint32_t l, const std::array<double, 24>& profile) {
      taken[l] = true;
      std::snprintf(id_buf, sizeof(id_buf), "l%05u", l);
      // One visit, sometimes a few more.
      const std::size_t visits = 1 + (UniformUnit(rng) < 0.2 ? 1 : 0) +
                                 (UniformUnit(rng) < 0.05 ? 1 : 0);
      for (std::size_t v = 0; v < visits; ++v) {
        LocalTime t;
        t.year = 2010;
        t.month = 1 + static_cast<int>(UniformIndex(rng, 12));
        t.day = 1 + static_cast<int>(UniformIndex(rng, 28));
        t.hour = DrawHour(profile, rng);
        t.minute = static_cast<int>(UniformIndex(rng, 60));
        records.push_back(Checkin{user_id, id_buf, loc_pos[l], t});
      }
    };
    auto draw_from_hood = [&](std::size_t h, std::size_t count,
                              const std::array<double, 24>& profile) {
      std::vector<double> w = hood_weights[h];
      for (std::size_t i = 0; i < hood_locs[h].size(); ++i) {
        if (taken[hood_locs[h][i]]) w[i] = 0.0;
      }
      for (std::size_t c = 0; c < count; ++c) {
        double total = 0.0;
        for (double x : w) total += x;
        if (total <= 0.0) break;
        double target = UniformUnit(rng) * total;
        std::size_t pick = 0;
        while (pick + 1 < w.size() && (target -= w[pick]) >= 0.0) ++pick;
        while (w[pick] == 0.0) --pick;
        w[pick] = 0.0;
        emit(hood_locs[h][pick], profile);
      }
    };
    draw_from_hood(home, n_home, kHomeHours);
    draw_from_hood(work, n_near - n_home, kWorkHours);
    for (std::size_t f = 0, guard = 0; f < n_far && guard < 100 * n_far;
         ++guard) {
      const auto l =
          static_cast<std::uint32_t>(UniformIndex(rng, params.n_locations));
      if (taken[l]) continue;
      emit(l, kFarHours);
      ++f;
    }
  }
  return CheckinsFromRecords(records);
}

}  // namespace dda
