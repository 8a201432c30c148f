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

#include "dda/recommend.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dda/error.h"
#include "dda/kernels.h"

namespace dda::recommend {

namespace {

// The single place the cosine weight is formed, so that every code path
// (pairwise, row-wise) rounds identically.
inline double CosineWeight(std::size_t overlap, std::size_t size_u,
                           std::size_t size_v) {
  if (overlap == 0) return 0.0;
  return static_cast<double>(overlap) /
         (std::sqrt(static_cast<double>(size_u)) *
          std::sqrt(static_cast<double>(size_v)));
}

}  // namespace

double CosineSimilarity(std::span<const std::uint32_t> u,
                        std::span<const std::uint32_t> v) {
  if (u.empty() || v.empty()) return 0.0;
  std::size_t overlap = 0;
  auto a = u.begin();
  auto b = v.begin();
  while (a != u.end() && b != v.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++overlap;
      ++a;
      ++b;
    }
  }
  return CosineWeight(overlap, u.size(), v.size());
}

SimilarityContext::SimilarityContext(const CheckinDataset& train)
    : vectors_(train.num_users()), visitors_(train.num_items()) {
  for (const CheckinPoint& p : train.points()) {
    vectors_[p.user].push_back(p.item);
  }
  for (std::uint32_t u = 0; u < vectors_.size(); ++u) {
    auto& v = vectors_[u];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::uint32_t loc : v) visitors_[loc].push_back(u);
  }
}

std::vector<double> SimilarityContext::SimilarityRow(
    std::span<const std::uint32_t> u,
    std::optional<std::uint32_t> self) const {
  std::vector<std::uint32_t> overlap(vectors_.size(), 0);
  for (std::uint32_t loc : u) {
    if (loc >= visitors_.size()) continue;
    for (std::uint32_t v : visitors_[loc]) ++overlap[v];
  }
  std::vector<double> w(vectors_.size(), 0.0);
  for (std::uint32_t v = 0; v < vectors_.size(); ++v) {
    if (self && *self == v) continue;
    w[v] = CosineWeight(overlap[v], u.size(), vectors_[v].size());
  }
  return w;
}

std::vector<double> SimilarityContext::LocationScores(
    std::span<const std::uint32_t> u,
    std::optional<std::uint32_t> self) const {
  const std::vector<double> w = SimilarityRow(u, self);
  std::vector<double> scores(visitors_.size(), 0.0);
  double denominator = 0.0;
  // Ascending v in both sums.
  for (std::uint32_t v = 0; v < w.size(); ++v) {
    if (w[v] == 0.0) continue;
    denominator += w[v];
    for (std::uint32_t loc : vectors_[v]) scores[loc] += w[v];
  }
  if (denominator > 0.0) {
    for (double& s : scores) s /= denominator;
  }
  return scores;
}

std::vector<std::uint32_t> SimilarityContext::TopN(
    std::span<const std::uint32_t> u, std::optional<std::uint32_t> self,
    std::size_t n) const {
  const std::vector<double> scores = LocationScores(u, self);
  std::vector<bool> visited(visitors_.size(), false);
  for (std::uint32_t loc : u) {
    if (loc < visited.size()) visited[loc] = true;
  }
  std::vector<std::uint32_t> positive;
  for (std::uint32_t loc = 0; loc < scores.size(); ++loc) {
    if (!visited[loc] && scores[loc] > 0.0) positive.push_back(loc);
  }
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::vector<std::uint32_t> out;
  if (positive.size() > n) {
    std::partial_sort(positive.begin(), positive.begin() + n, positive.end(),
                      better);
    out.assign(positive.begin(), positive.begin() + n);
    return out;
  }
  std::sort(positive.begin(), positive.end(), better);
  out = std::move(positive);
  // Zero-score candidates in ascending index order fill the tail.
  for (std::uint32_t loc = 0; loc < scores.size() && out.size() < n; ++loc) {
    if (!visited[loc] && !(scores[loc] > 0.0)) out.push_back(loc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Latent factor model

MFModel::MFModel(std::size_t n_users, std::size_t n_items,
                 std::size_t factors)
    : n_factors(factors),
      user_bias(n_users, 0.0),
      item_bias(n_items, 0.0),
      user_factors(n_users * factors, 0.0),
      item_factors(n_items * factors, 0.0),
      user_known(n_users, 0),
      item_known(n_items, 0) {}

double MFModel::Predict(std::uint32_t user, std::uint32_t item) const {
  double r = global_mean;
  const bool ku = IsKnownUser(user);
  const bool ki = IsKnownItem(item);
  if (ku) r += user_bias[user];
  if (ki) r += item_bias[item];
  if (ku && ki) r += kernels::Dot(user_row(user), item_row(item));
  return r;
}

double RatingLoss(const MFModel& m, const RatingPoint& r, double reg) {
  const double err = r.value - m.Predict(r.user, r.item);
  double norm = m.user_bias[r.user] * m.user_bias[r.user] +
                m.item_bias[r.item] * m.item_bias[r.item];
  for (double x : m.user_row(r.user)) norm += x * x;
  for (double x : m.item_row(r.item)) norm += x * x;
  return 0.5 * err * err + 0.5 * reg * norm;
}

RatingGradient RatingLossGradient(const MFModel& m, const RatingPoint& r,
                                  double reg) {
  const double err = r.value - m.Predict(r.user, r.item);
  RatingGradient g;
  g.user_bias = -err + reg * m.user_bias[r.user];
  g.item_bias = -err + reg * m.item_bias[r.item];
  const auto p = m.user_row(r.user);
  const auto q = m.item_row(r.item);
  g.user_factors.resize(m.n_factors);
  g.item_factors.resize(m.n_factors);
  for (std::size_t f = 0; f < m.n_factors; ++f) {
    g.user_factors[f] = -err * q[f] + reg * p[f];
    g.item_factors[f] = -err * p[f] + reg * q[f];
  }
  return g;
}

double Objective(const MFModel& m, const RatingDataset& data, double reg) {
  double total = 0.0;
  for (const RatingPoint& r : data.points()) total += RatingLoss(m, r, reg);
  return total;
}

namespace {

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

MFModel TrainMf(const RatingDataset& train, std::size_t n_factors,
                const SgdConfig& config, Seed seed, TrainTrace* trace) {
  if (train.empty()) throw InvalidArgument("train_mf: empty training set");
  if (n_factors == 0) throw InvalidArgument("train_mf: n_factors must be >= 1");
  if (config.epochs < 0 || !(config.learning_rate > 0.0) ||
      config.regularization < 0.0 || config.init_stddev < 0.0) {
    throw InvalidArgument("train_mf: bad hyperparameters");
  }

  MFModel m(train.num_users(), train.num_items(), n_factors);
  double sum = 0.0;
  for (const RatingPoint& r : train.points()) {
    sum += r.value;
    m.user_known[r.user] = 1;
    m.item_known[r.item] = 1;
  }
  m.global_mean = sum / static_cast<double>(train.size());

  std::mt19937_64 init_rng = seed.Derive("mf-init").Engine();
  std::normal_distribution<double> init(0.0, config.init_stddev);
  for (double& x : m.user_factors) x = config.init_stddev > 0 ? init(init_rng) : 0.0;
  for (double& x : m.item_factors) x = config.init_stddev > 0 ? init(init_rng) : 0.0;

  std::mt19937_64 order_rng = seed.Derive("mf-order").Engine();
  std::vector<std::uint32_t> order(train.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;

  const double lr = config.learning_rate;
  const double reg = config.regularization;
  const auto points = train.points();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[UniformIndex(order_rng, i)]);
    }
    for (std::uint32_t idx : order) {
      const RatingPoint& r = points[idx];
      auto p = m.user_row(r.user);
      auto q = m.item_row(r.item);
      const double pred = m.global_mean + m.user_bias[r.user] +
                          m.item_bias[r.item] + kernels::Dot(p, q);
      const double err = r.value - pred;
      m.user_bias[r.user] += lr * (err - reg * m.user_bias[r.user]);
      m.item_bias[r.item] += lr * (err - reg * m.item_bias[r.item]);
      kernels::SgdFactorStep(p, q, err, lr, reg);
    }
    if (!AllFinite(m.user_bias) || !AllFinite(m.item_bias) ||
        !AllFinite(m.user_factors) || !AllFinite(m.item_factors)) {
      throw RuntimeError("train_mf: diverged at epoch " +
                         std::to_string(epoch) +
                         " (non-finite parameter; lower the learning rate)");
    }
    if (trace != nullptr) {
      double sq = 0.0;
      for (const RatingPoint& r : points) {
        const double e = r.value - m.Predict(r.user, r.item);
        sq += e * e;
      }
      trace->rmse.push_back(std::sqrt(sq / static_cast<double>(points.size())));
      trace->objective.push_back(Objective(m, train, reg));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr const char* kModelMagic = "dda-mf-model";
constexpr int kModelVersion = 1;

void WriteVector(std::ostream& out, const char* name,
                 const std::vector<double>& v) {
  out << name << ' ' << v.size() << '\n';
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%a\n", x);
    out << buf;
  }
}

void WriteFlags(std::ostream& out, const char* name,
                const std::vector<std::uint8_t>& v) {
  out << name << ' ' << v.size() << '\n';
  for (std::uint8_t x : v) out << (x ? '1' : '0');
  out << '\n';
}

std::vector<double> ReadVector(std::istream& in, const char* name) {
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != name) {
    throw DatasetError(std::string("model dump: expected section ") + name);
  }
  std::vector<double> v(n);
  std::string token;
  for (double& x : v) {
    if (!(in >> token)) throw DatasetError("model dump: truncated");
    x = std::strtod(token.c_str(), nullptr);
  }
  return v;
}

std::vector<std::uint8_t> ReadFlags(std::istream& in, const char* name) {
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != name) {
    throw DatasetError(std::string("model dump: expected section ") + name);
  }
  std::string bits;
  if (n > 0 && !(in >> bits)) throw DatasetError("model dump: truncated");
  if (bits.size() != n) throw DatasetError("model dump: bad flag section");
  std::vector<std::uint8_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = bits[i] == '1';
  return v;
}

}  // namespace

void SaveModel(const MFModel& m, std::ostream& out) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", m.global_mean);
  out << kModelMagic << ' ' << kModelVersion << '\n'
      << "factors " << m.n_factors << '\n'
      << "mean " << buf << '\n';
  WriteVector(out, "user_bias", m.user_bias);
  WriteVector(out, "item_bias", m.item_bias);
  WriteVector(out, "user_factors", m.user_factors);
  WriteVector(out, "item_factors", m.item_factors);
  WriteFlags(out, "user_known", m.user_known);
  WriteFlags(out, "item_known", m.item_known);
}

MFModel LoadModel(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kModelMagic) {
    throw DatasetError("model dump: bad magic");
  }
  if (version != kModelVersion) {
    throw DatasetError("model dump: unsupported version " +
                       std::to_string(version));
  }
  MFModel m;
  std::string tag;
  std::string mean;
  if (!(in >> tag >> m.n_factors) || tag != "factors" ||
      !(in >> tag >> mean) || tag != "mean") {
    throw DatasetError("model dump: bad header");
  }
  m.global_mean = std::strtod(mean.c_str(), nullptr);
  m.user_bias = ReadVector(in, "user_bias");
  m.item_bias = ReadVector(in, "item_bias");
  m.user_factors = ReadVector(in, "user_factors");
  m.item_factors = ReadVector(in, "item_factors");
  m.user_known = ReadFlags(in, "user_known");
  m.item_known = ReadFlags(in, "item_known");
  if (m.user_factors.size() != m.user_bias.size() * m.n_factors ||
      m.item_factors.size() != m.item_bias.size() * m.n_factors ||
      m.user_known.size() != m.user_bias.size() ||
      m.item_known.size() != m.item_bias.size()) {
    throw DatasetError("model dump: inconsistent dimensions");
  }
  return m;
}

}  // namespace dda::recommend
