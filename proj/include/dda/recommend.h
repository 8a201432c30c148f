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

#ifndef DDA_RECOMMEND_H_
#define DDA_RECOMMEND_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dda/dataset.h"
#include "dda/seed.h"

namespace dda::recommend {

// ---------------------------------------------------------------------------
// User-based cosine Top-N over binary location data.

// A user's binary vector over the location catalog, stored as the sorted,
// duplicate-free list of visited location indices.
using UserVector = std::vector<std::uint32_t>;

// u.v / (|u| |v|) for binary vectors; 0 when either vector is all-zero.
double CosineSimilarity(std::span<const std::uint32_t> u,
                        std::span<const std::uint32_t> v);

// The training user vectors plus, for every location i, the ascending list
// L_i of users who visited it.
class SimilarityContext {
 public:
  explicit SimilarityContext(const CheckinDataset& train);

  std::size_t num_users() const { return vectors_.size(); }
  std::size_t num_locations() const { return visitors_.size(); }

  std::span<const std::uint32_t> user_vector(std::uint32_t user) const {
    return vectors_[user];
  }
  std::span<const std::uint32_t> visitors(std::uint32_t location) const {
    return visitors_[location];
  }

  // w_{u,v} for every training user v; the entry for `self` (if given) is
  // 0. `u` may be any vector over the catalog.
  std::vector<double> SimilarityRow(std::span<const std::uint32_t> u,
                                    std::optional<std::uint32_t> self) const;

  // c_{u,i} for every location i: the similarity-weighted fraction of other
  // users who visited i. The denominator runs over all other training
  // users. A user with no similar user scores 0 everywhere.
  std::vector<double> LocationScores(std::span<const std::uint32_t> u,
                                     std::optional<std::uint32_t> self) const;
  std::vector<double> LocationScores(std::uint32_t user) const {
    return LocationScores(vectors_[user], user);
  }
  double LocationScore(std::uint32_t user, std::uint32_t location) const {
    return LocationScores(user)[location];
  }

  // The n unvisited locations with the highest score, ties broken by
  // ascending location index. Shorter when fewer candidates exist.
  std::vector<std::uint32_t> TopN(std::span<const std::uint32_t> u,
                                  std::optional<std::uint32_t> self,
                                  std::size_t n) const;
  std::vector<std::uint32_t> TopN(std::uint32_t user, std::size_t n) const {
    return TopN(vectors_[user], user, n);
  }

 private:
  std::vector<UserVector> vectors_;
  std::vector<std::vector<std::uint32_t>> visitors_;
};

// ---------------------------------------------------------------------------
// Biased latent factor model trained by SGD.

struct SgdConfig {
  double learning_rate = 0.005;
  double regularization = 0.02;
  int epochs = 30;
  double init_stddev = 0.1;
};

// r_hat(u, i) = mu + b_u + b_i + p_u . q_i. Factor rows are stored
// contiguously, n_factors doubles per user or item.
struct MFModel {
  std::size_t n_factors = 0;
  double global_mean = 0.0;
  std::vector<double> user_bias;
  std::vector<double> item_bias;
  std::vector<double> user_factors;
  std::vector<double> item_factors;
  // Whether the user/item had training data. Unknown ones contribute no
  // bias or factor term.
  std::vector<std::uint8_t> user_known;
  std::vector<std::uint8_t> item_known;

  MFModel() = default;
  MFModel(std::size_t n_users, std::size_t n_items, std::size_t n_factors);

  std::size_t num_users() const { return user_bias.size(); }
  std::size_t num_items() const { return item_bias.size(); }

  std::span<double> user_row(std::uint32_t u) {
    return {user_factors.data() + u * n_factors, n_factors};
  }
  std::span<double> item_row(std::uint32_t i) {
    return {item_factors.data() + i * n_factors, n_factors};
  }
  std::span<const double> user_row(std::uint32_t u) const {
    return {user_factors.data() + u * n_factors, n_factors};
  }
  std::span<const double> item_row(std::uint32_t i) const {
    return {item_factors.data() + i * n_factors, n_factors};
  }

  bool IsKnownUser(std::uint32_t u) const {
    return u < user_known.size() && user_known[u] != 0;
  }
  bool IsKnownItem(std::uint32_t i) const {
    return i < item_known.size() && item_known[i] != 0;
  }

  double Predict(std::uint32_t user, std::uint32_t item) const;
};

inline double PredictRating(const MFModel& m, std::uint32_t user,
                            std::uint32_t item) {
  return m.Predict(user, item);
}

struct TrainTrace {
  // Regularized objective and train RMSE after each epoch.
  std::vector<double> objective;
  std::vector<double> rmse;
};

// Minimizes sum over ratings of 1/2 e^2 + 1/2 reg (b_u^2 + b_i^2 + |p_u|^2 +
// |q_i|^2) by one gradient step per rating over shuffled epochs. mu is the
// training mean and is not learned. Throws a runtime Error naming the
// epoch if any parameter becomes non-finite.
MFModel TrainMf(const RatingDataset& train, std::size_t n_factors,
                const SgdConfig& config, Seed seed,
                TrainTrace* trace = nullptr);

// The per-rating objective term optimized by TrainMf.
double RatingLoss(const MFModel& m, const RatingPoint& r, double reg);

struct RatingGradient {
  double user_bias = 0.0;
  double item_bias = 0.0;
  std::vector<double> user_factors;
  std::vector<double> item_factors;
};

// Analytic gradient of RatingLoss with respect to the parameters it touches.
RatingGradient RatingLossGradient(const MFModel& m, const RatingPoint& r,
                                  double reg);

// Full training objective (sum of RatingLoss).
double Objective(const MFModel& m, const RatingDataset& data, double reg);

// Versioned text dump; doubles in hex-float so a reload is bit-exact.
void SaveModel(const MFModel& m, std::ostream& out);
MFModel LoadModel(std::istream& in);

}  // namespace dda::recommend

#endif  // DDA_RECOMMEND_H_
