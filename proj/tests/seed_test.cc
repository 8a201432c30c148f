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

#include "dda/seed.h"

#include <set>

#include <gtest/gtest.h>

namespace dda {
namespace {

TEST(SeedTest, DerivationIsPureAndLabelSensitive) {
  const Seed s(42);
  EXPECT_EQ(s.Derive("split"), Seed(42).Derive("split"));
  EXPECT_NE(s.Derive("split"), s.Derive("splat"));
  EXPECT_NE(s.Derive(1), s.Derive(2));
  EXPECT_NE(s.Derive("a"), Seed(43).Derive("a"));
}

TEST(SeedTest, EnginesReproduce) {
  auto a = Seed(7).Derive("x").Engine();
  auto b = Seed(7).Derive("x").Engine();
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(SeedTest, Fnv1aKnownVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(SeedTest, UniformUnitRange) {
  auto rng = Seed(1).Engine();
  for (int i = 0; i < 10000; ++i) {
    const double u = UniformUnit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SeedTest, DerivedIndicesAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seen.insert(Seed(3).Derive(i).value());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

}  // namespace
}  // namespace dda
