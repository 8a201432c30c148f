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

#include "dda/report.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

namespace dda::report {
namespace {

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(FormatTest, RoundTripAndSpecials) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(FormatDouble(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(FormatDouble(std::nan("")), "nan");
}

TEST(ResultCsvTest, Layout) {
  const auto t = diffscan::ZScoresFromValues({"1", "2"}, {0.5, 0.25});
  diffscan::BaselineStats b;
  b.mean = 0.4;
  b.stddev = 0.125;
  const auto dir = std::filesystem::temp_directory_path() / "dda-report-test";
  WriteResultCsv(dir / "result.csv", t, 0.75, &b);
  EXPECT_EQ(Slurp(dir / "result.csv"),
            "chunk,accuracy,zscore\n1,0.5,1\n2,0.25,-1\nfull,0.75,\n"
            "baseline,0.40000000000000002,0.125\n");
  WritePlotCsv(dir / "plot.csv", {{"beta=3", {0.3, 0.4}, {1, 2}}});
  EXPECT_EQ(Slurp(dir / "plot.csv"),
            "x,y,series\n0.29999999999999999,1,beta=3\n"
            "0.40000000000000002,2,beta=3\n");
  std::filesystem::remove_all(dir);
}

TEST(JsonTest, PlanHasChunks) {
  const auto t = diffscan::ZScoresFromValues({"1", "2", "3"}, {1, 2, 4});
  const auto plan = obfuscate::BuildSuppressionPlan(t, 0.3, 3.0);
  const Json j = ToJson(plan);
  EXPECT_EQ(j["chunks"].size(), 3u);
  EXPECT_EQ(j["alpha"].get<double>(), 0.3);
  const Json none = ToJson(obfuscate::BuildSuppressionPlan(t, 0.0, 3.0));
  EXPECT_EQ(none["k"].get<std::string>(), "inf");
}

}  // namespace
}  // namespace dda::report
