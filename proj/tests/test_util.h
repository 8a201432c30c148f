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

#ifndef DDA_TESTS_TEST_UTIL_H_
#define DDA_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "dda/dataset.h"

namespace dda::testing {

struct Visit {
  std::string user;
  std::string location;
  double lat;
  double lon;
  int hour;
};

inline CheckinDataset Checkins(const std::vector<Visit>& visits) {
  std::vector<Checkin> records;
  for (const Visit& v : visits) {
    LocalTime t;
    t.year = 2010;
    t.hour = v.hour;
    records.push_back({v.user, v.location, {v.lat, v.lon}, t});
  }
  return CheckinsFromRecords(records);
}

// Point (lat, lon) `km` kilometres north of (lat0, lon0) along a meridian.
inline geo::GeoPoint North(double lat0, double lon0, double km) {
  constexpr double kPi = 3.14159265358979323846;
  return {lat0 + km / geo::kEarthRadiusKm * 180.0 / kPi, lon0};
}

}  // namespace dda::testing

#endif  // DDA_TESTS_TEST_UTIL_H_
