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

#ifndef DDA_GEO_H_
#define DDA_GEO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dda/seed.h"

namespace dda::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool InBounds(const GeoPoint& p);

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double HaversineKm(const GeoPoint& a, const GeoPoint& b);

// Unit vectors on the sphere, stored structure-of-arrays for the
// nearest-neighbour kernels. Squared chord length c^2 between two unit
// vectors relates to great-circle distance by d = 2R asin(c / 2).
struct UnitVectors {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;

  std::size_t size() const { return x.size(); }
  void Append(const GeoPoint& p);
};

UnitVectors ToUnitVectors(std::span<const GeoPoint> points);
double ChordSqToKm(double chord_sq);

// Minimum great-circle distance from `query` to any point of `set`,
// skipping index `skip` (pass set.size() to skip nothing). Returns +inf on
// an empty candidate set.
double NearestKm(const UnitVectors& set, const GeoPoint& query,
                 std::size_t skip);

struct KMeansResult {
  std::vector<GeoPoint> centroids;
  std::vector<std::uint32_t> assignment;
  // Sum of squared assigned haversine distances, one entry per assignment
  // step (index 0 = after the initial assignment).
  std::vector<double> objective;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kKMeansMaxIterations = 100;

// Lloyd's algorithm under the haversine metric. Centroids start at k
// distinct input points sampled uniformly under `seed` (duplicates only
// when k exceeds the number of points); the update step takes the
// arithmetic mean of member lat/lon, which is an approximation that is
// only sound at city scale. Empty clusters keep their previous centroid.
KMeansResult KMeans(std::span<const GeoPoint> points, std::size_t k,
                    Seed seed, int max_iterations = kKMeansMaxIterations);

}  // namespace dda::geo

#endif  // DDA_GEO_H_
