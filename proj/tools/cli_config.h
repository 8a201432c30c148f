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


#ifndef DDA_TOOLS_CLI_CONFIG_H_
#define DDA_TOOLS_CLI_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dda/experiment.h"
#include "dda/obfuscate.h"
#include "dda/report.h"

namespace dda::cli {

using report::Json;

enum class DatasetKind { kCity, kCheckins, kMovieLens, kRatings, kSynthetic };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::kCity;
  std::filesystem::path path;
  // City defaults for users/locations; synthetic ratings use users too.
  std::size_t users = 500;
  std::size_t locations = 2000;
  std::size_t items = 400;
  std::size_t factors = 20;
  std::size_t ratings = 100000;

  bool checkins() const {
    return kind == DatasetKind::kCity || kind == DatasetKind::kCheckins;
  }
};

struct Config {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;
  DatasetConfig dataset;
  double test_fraction = 0.2;
  experiment::AttributeConfig attribute;
  experiment::RecommenderConfig recommender;

  std::size_t baseline_trials = 20;
  // Unset: the mean share of the training set held by one chunk.
  std::optional<double> baseline_fraction;

  std::string stability_mode = "users";
  std::size_t stability_groups = 4;
  std::size_t stability_folds = 5;

  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> betas{0.0, 3.0};

  std::size_t fake_multiplier = 10;
  obfuscate::FakeMeasure fake_measure = obfuscate::FakeMeasure::kDensity;

  std::vector<double> replace_fractions{0.1, 0.2, 0.3};
  double replace_beta = 3.0;
  // 1-based fake decile; unset picks the least harmful one on half A.
  std::optional<std::size_t> replace_decile;

  double reduce_target = 0.4;
  double reduce_noise_threshold = obfuscate::kDefaultNoiseThreshold;
  bool reduce_time = true;
};

// Flag values layered over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> cache_dir;
  std::optional<std::string> metric;
  std::optional<std::size_t> top_n;
  std::optional<std::size_t> chunks;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::optional<std::string> attribute;
  std::optional<std::string> recommender;
  std::optional<std::string> dataset;
  std::optional<std::string> input;
  std::optional<std::size_t> users;
  std::optional<std::size_t> locations;
  std::optional<std::size_t> items;
  std::optional<std::size_t> factors;
  std::optional<std::size_t> ratings;
  std::optional<std::string> mode;
};

Json ReadConfigFile(const std::filesystem::path& path);

// Merges overrides into the raw document; the result is what gets echoed.
void ApplyOverrides(const Overrides& o, Json& doc);

// Throws InvalidArgument naming the offending key.
Config Resolve(const Json& doc);

// Every effective setting, defaults included.
Json ToJson(const Config& c);

}  // namespace dda::cli

#endif  // DDA_TOOLS_CLI_CONFIG_H_
