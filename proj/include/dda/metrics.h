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

#ifndef DDA_METRICS_H_
#define DDA_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dda/dataset.h"

namespace dda::metrics {

struct AccuracyReport {
  std::string metric;
  double value = 0.0;
  std::size_t n_users = 0;        // users evaluated
  std::size_t n_predictions = 0;  // recommendations issued / ratings scored
  std::size_t n_skipped_users = 0;
};

// Recommendation lists indexed by user; an empty list means the user was
// not evaluated.
using Recommendations = std::vector<std::vector<std::uint32_t>>;

// Total hits / total recommendations issued over users with a non-empty
// list. Throws if no recommendation was issued.
AccuracyReport PrecisionAtN(const Recommendations& recs,
                            const CheckinDataset& test, std::size_t n);

// Mean over users of hits / |test set of user|, over users with a non-empty
// test set and a recommendation list. Throws if no user is evaluable.
AccuracyReport MacroRecall(const Recommendations& recs,
                           const CheckinDataset& test, std::size_t n);

// Root mean squared and mean absolute error. Spans must be the same
// non-zero length.
double Rmse(std::span<const double> predictions,
            std::span<const double> actuals);
double Mae(std::span<const double> predictions,
           std::span<const double> actuals);

}  // namespace dda::metrics

#endif  // DDA_METRICS_H_
