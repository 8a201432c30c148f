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

#include "dda/metrics.h"

#include <algorithm>
#include <cmath>

#include "dda/error.h"

namespace dda::metrics {

namespace {

// Hits of the first n entries of `list` against the user's test items.
std::size_t CountHits(std::span<const std::uint32_t> list, std::size_t n,
                      const CheckinDataset& test, std::uint32_t user) {
  std::vector<std::uint32_t> truth;
  for (std::uint32_t idx : test.UserPoints(user)) truth.push_back(test[idx].item);
  std::sort(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < list.size() && k < n; ++k) {
    if (std::binary_search(truth.begin(), truth.end(), list[k])) ++hits;
  }
  return hits;
}

void CheckLengths(std::span<const double> p, std::span<const double> a) {
  if (p.size() != a.size()) {
    throw InvalidArgument("metric: " + std::to_string(p.size()) +
                          " predictions vs " + std::to_string(a.size()) +
                          " actuals");
  }
  if (p.empty()) throw InvalidArgument("metric: empty input");
}

}  // namespace

AccuracyReport PrecisionAtN(const Recommendations& recs,
                            const CheckinDataset& test, std::size_t n) {
  AccuracyReport report{"precision@" + std::to_string(n)};
  std::size_t hits = 0;
  for (std::uint32_t u = 0; u < recs.size(); ++u) {
    if (recs[u].empty()) continue;
    const std::size_t issued = std::min(recs[u].size(), n);
    hits += CountHits(recs[u], n, test, u);
    report.n_predictions += issued;
    ++report.n_users;
  }
  if (report.n_predictions == 0) {
    throw InvalidArgument("precision: no recommendations issued");
  }
  report.value = static_cast<double>(hits) /
                 static_cast<double>(report.n_predictions);
  return report;
}

AccuracyReport MacroRecall(const Recommendations& recs,
                           const CheckinDataset& test, std::size_t n) {
  AccuracyReport report{"recall@" + std::to_string(n)};
  double sum = 0.0;
  for (std::uint32_t u = 0; u < recs.size(); ++u) {
    const std::size_t truth = test.UserPoints(u).size();
    if (recs[u].empty() || truth == 0) {
      if (!recs[u].empty() || truth != 0) ++report.n_skipped_users;
      continue;
    }
    sum += static_cast<double>(CountHits(recs[u], n, test, u)) /
           static_cast<double>(truth);
    report.n_predictions += std::min(recs[u].size(), n);
    ++report.n_users;
  }
  if (report.n_users == 0) throw InvalidArgument("recall: no evaluable users");
  report.value = sum / static_cast<double>(report.n_users);
  return report;
}

double Rmse(std::span<const double> predictions,
            std::span<const double> actuals) {
  CheckLengths(predictions, actuals);
  double sq = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - actuals[i];
    sq += e * e;
  }
  return std::sqrt(sq / static_cast<double>(predictions.size()));
}

double Mae(std::span<const double> predictions,
           std::span<const double> actuals) {
  CheckLengths(predictions, actuals);
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    abs_sum += std::abs(predictions[i] - actuals[i]);
  }
  return abs_sum / static_cast<double>(predictions.size());
}

}  // namespace dda::metrics
