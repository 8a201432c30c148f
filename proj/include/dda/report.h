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

#ifndef DDA_REPORT_H_
#define DDA_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dda/diffscan.h"
#include "dda/obfuscate.h"

namespace dda::report {

using Json = nlohmann::ordered_json;

// Shortest round-trip formatting ("%.17g"); non-finite values become
// "nan", "inf" or "-inf".
std::string FormatDouble(double v);

Json ToJson(const diffscan::DifferentialResult& r);
Json ToJson(const diffscan::ZScoreTable& t);
Json ToJson(const diffscan::BaselineStats& b);
Json ToJson(const diffscan::StabilityReport& s);
Json ToJson(const obfuscate::SuppressionPlan& p);
Json ToJson(const obfuscate::ReductionPlan& p);

// chunk,accuracy,zscore rows followed by a "full" row and, when present,
// a "baseline" row holding the mean and sample std of random removal.
void WriteResultCsv(const std::filesystem::path& path,
                    const diffscan::ZScoreTable& table, double full_accuracy,
                    const diffscan::BaselineStats* baseline = nullptr);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Long format: x,y,series.
void WritePlotCsv(const std::filesystem::path& path,
                  const std::vector<PlotSeries>& series);

void WriteJson(const std::filesystem::path& path, const Json& doc);

}  // namespace dda::report

#endif  // DDA_REPORT_H_
