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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace dda::geo {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Spherical law of cosines, an independent great-circle formula.
double LawOfCosinesKm(GeoPoint a, GeoPoint b) {
  const double r = kPi / 180.0;
  const double c = std::sin(a.lat * r) * std::sin(b.lat * r) +
                   std::cos(a.lat * r) * std::cos(b.lat * r) *
                       std::cos((b.lon - a.lon) * r);
  return kEarthRadiusKm * std::acos(std::clamp(c, -1.0, 1.0));
}

TEST(HaversineTest, Identity) {
  EXPECT_EQ(HaversineKm({30.2672, -97.7431}, {30.2672, -97.7431}), 0.0);
}

TEST(HaversineTest, AustinDallasMatchesIndependentFormula) {
  const GeoPoint austin{30.2672, -97.7431};
  const GeoPoint dallas{32.7767, -96.7970};
  const double d = HaversineKm(austin, dallas);
  EXPECT_NEAR(d, LawOfCosinesKm(austin, dallas), 0.005 * d);
  EXPECT_NEAR(d, 292.0, 5.0);
}

TEST(HaversineTest, SymmetryAndTriangleInequality) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lat(-89.0, 89.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint a{lat(rng), lon(rng)};
    const GeoPoint b{lat(rng), lon(rng)};
    const GeoPoint c{lat(rng), lon(rng)};
    EXPECT_DOUBLE_EQ(HaversineKm(a, b), HaversineKm(b, a));
    EXPECT_LE(HaversineKm(a, c), HaversineKm(a, b) + HaversineKm(b, c) + 1e-9);
    EXPECT_NEAR(HaversineKm(a, b), LawOfCosinesKm(a, b), 1e-3);
  }
}

TEST(HaversineTest, Bounds) {
  EXPECT_TRUE(InBounds({90.0, 180.0}));
  EXPECT_FALSE(InBounds({91.0, 0.0}));
  EXPECT_FALSE(InBounds({0.0, -180.5}));
  EXPECT_FALSE(InBounds({std::nan(""), 0.0}));
}

TEST(NearestTest, ChordMatchesHaversine) {
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(testing::North(30.0, -97.0, 1.5 * i));
  const UnitVectors uv = ToUnitVectors(pts);
  const GeoPoint q = testing::North(30.0, -97.0, 4.0);
  EXPECT_NEAR(NearestKm(uv, q, uv.size()), 0.5, 1e-6);
  EXPECT_NEAR(NearestKm(uv, pts[3], 3), 1.5, 1e-6);
  EXPECT_TRUE(std::isinf(NearestKm(UnitVectors{}, q, 0)));
}

TEST(KMeansTest, SinglePoint) {
  const std::vector<GeoPoint> pts = {{30.1, -97.2}};
  const auto r = KMeans(pts, 1, Seed(1));
  ASSERT_EQ(r.centroids.size(), 1u);
  EXPECT_EQ(r.centroids[0], pts[0]);
}

TEST(KMeansTest, KOneIsMean) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  std::vector<GeoPoint> pts;
  double slat = 0;
  double slon = 0;
  for (int i = 0; i < 57; ++i) {
    pts.push_back({30.0 + d(rng), -97.0 + d(rng)});
    slat += pts.back().lat;
    slon += pts.back().lon;
  }
  const auto r = KMeans(pts, 1, Seed(2));
  EXPECT_NEAR(r.centroids[0].lat, slat / 57, 1e-12);
  EXPECT_NEAR(r.centroids[0].lon, slon / 57, 1e-12);
}

TEST(KMeansTest, SeparatedBlobs) {
  // Blob radius ~10 m, separation ~10 km.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-0.0001, 0.0001);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({30.0 + d(rng), -97.0 + d(rng)});
  for (int i = 0; i < 40; ++i) pts.push_back({30.1 + d(rng), -97.0 + d(rng)});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = KMeans(pts, 2, Seed(s));
    int in_a = 0;
    int in_b = 0;
    for (const GeoPoint& c : r.centroids) {
      if (std::abs(c.lat - 30.0) <= 0.0001 && std::abs(c.lon + 97.0) <= 0.0001) ++in_a;
      if (std::abs(c.lat - 30.1) <= 0.0001 && std::abs(c.lon + 97.0) <= 0.0001) ++in_b;
    }
    EXPECT_EQ(in_a, 1);
    EXPECT_EQ(in_b, 1);
    EXPECT_TRUE(r.converged);
  }
}

TEST(KMeansTest, ObjectiveNonIncreasingAtCityScale) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(0.0, 0.02);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 300; ++i) {
    const double cx = (i % 3) * 0.05;
    pts.push_back({30.2 + cx + d(rng), -97.7 + d(rng)});
  }
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = KMeans(pts, 4, Seed(s));
    for (std::size_t i = 1; i < r.objective.size(); ++i) {
      // Mean lat/lon is not the exact spherical minimizer.
      EXPECT_LE(r.objective[i], r.objective[i - 1] * (1 + 1e-6));
    }
  }
}

TEST(KMeansTest, Deterministic) {
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(testing::North(30.0, -97.0, i * 0.3));
  const auto a = KMeans(pts, 3, Seed(11));
  const auto b = KMeans(pts, 3, Seed(11));
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.assignment, b.assignment);
}

}  // namespace
}  // namespace dda::geo
