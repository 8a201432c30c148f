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

#include "dda/geo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dda/error.h"
#include "dda/kernels.h"

namespace dda::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool InBounds(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double HaversineKm(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double sin_dlat = std::sin((lat2 - lat1) / 2.0);
  const double sin_dlon = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  double h = sin_dlat * sin_dlat +
             std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

void UnitVectors::Append(const GeoPoint& p) {
  const double lat = p.lat * kDegToRad;
  const double lon = p.lon * kDegToRad;
  x.push_back(std::cos(lat) * std::cos(lon));
  y.push_back(std::cos(lat) * std::sin(lon));
  z.push_back(std::sin(lat));
}

UnitVectors ToUnitVectors(std::span<const GeoPoint> points) {
  UnitVectors out;
  out.x.reserve(points.size());
  out.y.reserve(points.size());
  out.z.reserve(points.size());
  for (const GeoPoint& p : points) out.Append(p);
  return out;
}

double ChordSqToKm(double chord_sq) {
  if (!std::isfinite(chord_sq)) return chord_sq;
  const double half = std::min(1.0, std::sqrt(std::max(0.0, chord_sq)) / 2.0);
  return 2.0 * kEarthRadiusKm * std::asin(half);
}

double NearestKm(const UnitVectors& set, const GeoPoint& query,
                 std::size_t skip) {
  UnitVectors q;
  q.Append(query);
  return ChordSqToKm(kernels::MinSqDistance3(set.x, set.y, set.z, q.x[0],
                                             q.y[0], q.z[0], skip));
}

namespace {

// Returns the objective of the assignment.
double Assign(std::span<const GeoPoint> points,
              std::span<const GeoPoint> centroids,
              std::vector<std::uint32_t>& assignment, bool& changed) {
  changed = false;
  double objective = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = HaversineKm(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(c);
      }
    }
    if (assignment[i] != best) {
      assignment[i] = best;
      changed = true;
    }
    objective += best_d * best_d;
  }
  return objective;
}

}  // namespace

KMeansResult KMeans(std::span<const GeoPoint> points, std::size_t k,
                    Seed seed, int max_iterations) {
  if (points.empty()) throw InvalidArgument("kmeans: empty input");
  if (k == 0) throw InvalidArgument("kmeans: k must be >= 1");

  KMeansResult result;
  std::mt19937_64 rng = seed.Engine();

  // Partial Fisher-Yates over indices picks min(k, n) distinct points;
  // anything beyond n cycles through the picks.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t distinct = std::min(k, points.size());
  for (std::size_t i = 0; i < distinct; ++i) {
    const std::size_t j = i + UniformIndex(rng, order.size() - i);
    std::swap(order[i], order[j]);
  }
  result.centroids.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    result.centroids.push_back(points[order[c % distinct]]);
  }

  result.assignment.assign(points.size(),
                           std::numeric_limits<std::uint32_t>::max());
  bool changed = false;
  result.objective.push_back(
      Assign(points, result.centroids, result.assignment, changed));

  std::vector<double> sum_lat(k);
  std::vector<double> sum_lon(k);
  std::vector<std::size_t> count(k);
  while (result.iterations < max_iterations) {
    std::fill(sum_lat.begin(), sum_lat.end(), 0.0);
    std::fill(sum_lon.begin(), sum_lon.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::uint32_t c = result.assignment[i];
      sum_lat[c] += points[i].lat;
      sum_lon[c] += points[i].lon;
      ++count[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      const double n = static_cast<double>(count[c]);
      result.centroids[c] = GeoPoint{sum_lat[c] / n, sum_lon[c] / n};
    }
    ++result.iterations;
    result.objective.push_back(
        Assign(points, result.centroids, result.assignment, changed));
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace dda::geo
