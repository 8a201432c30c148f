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


#include "cli_config.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>
#include <type_traits>

#include "dda/error.h"

namespace dda::cli {
namespace {

namespace ex = experiment;

void CheckKeys(const Json& obj, std::string_view section,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw InvalidArgument("'" + std::string(section) + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string known;
      for (std::string_view a : allowed) {
        if (!known.empty()) known += ", ";
        known += a;
      }
      throw InvalidArgument("unknown key '" + std::string(section) + "." +
                            key + "'; allowed: " + known);
    }
  }
}

const Json& Section(const Json& doc, const char* name) {
  static const Json kEmpty = Json::object();
  auto it = doc.find(name);
  return it == doc.end() || it->is_null() ? kEmpty : *it;
}

template <class T>
std::optional<T> Find(const Json& obj, std::string_view section,
                      const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!it->is_number_integer() || it->template get<std::int64_t>() < 0) {
      throw InvalidArgument("'" + std::string(section) + "." + key +
                            "' must be a non-negative integer");
    }
  }
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument("'" + std::string(section) + "." + key +
                          "' has the wrong type");
  }
}

template <class T>
void Read(const Json& obj, std::string_view section, const char* key,
          T& out) {
  if (auto v = Find<T>(obj, section, key)) out = *v;
}

void RequireFraction(double v, const char* what, bool allow_zero) {
  if (!(v <= 1.0) || v < 0.0 || (!allow_zero && v == 0.0)) {
    throw InvalidArgument(std::string(what) + " must lie in " +
                          (allow_zero ? "[0, 1]" : "(0, 1]"));
  }
}

const char* Name(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kCity:
      return "city";
    case DatasetKind::kCheckins:
      return "checkins";
    case DatasetKind::kMovieLens:
      return "movielens";
    case DatasetKind::kRatings:
      return "ratings";
    case DatasetKind::kSynthetic:
      return "synthetic";
  }
  return "unknown";
}

template <class T>
Json OrNull(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

DatasetKind ParseDatasetKind(std::string_view name) {
  if (name == "city") return DatasetKind::kCity;
  if (name == "checkins") return DatasetKind::kCheckins;
  if (name == "movielens") return DatasetKind::kMovieLens;
  if (name == "ratings") return DatasetKind::kRatings;
  if (name == "synthetic") return DatasetKind::kSynthetic;
  throw InvalidArgument("unknown dataset kind '" + std::string(name) +
                        "'; registered: city, checkins, movielens, ratings, "
                        "synthetic");
}

}  // namespace

Json ReadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  try {
    return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void ApplyOverrides(const Overrides& o, Json& doc) {
  if (doc.is_null()) doc = Json::object();
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  auto sub = [&doc](const char* name) -> Json& {
    Json& s = doc[name];
    if (s.is_null()) s = Json::object();
    return s;
  };
  if (o.seed) doc["seed"] = *o.seed;
  if (o.out_dir) doc["out_dir"] = *o.out_dir;
  if (o.cache_dir) doc["cache_dir"] = *o.cache_dir;
  if (o.metric) sub("recommender")["metric"] = *o.metric;
  if (o.top_n) sub("recommender")["top_n"] = *o.top_n;
  if (o.recommender) sub("recommender")["name"] = *o.recommender;
  if (o.factors) sub("recommender")["factors"] = *o.factors;
  if (o.chunks) sub("attribute")["chunks"] = *o.chunks;
  if (o.attribute) sub("attribute")["name"] = *o.attribute;
  if (!o.alpha.empty()) sub("suppress")["alpha"] = o.alpha;
  if (!o.beta.empty()) {
    sub("suppress")["beta"] = o.beta;
    sub("replace")["beta"] = o.beta.back();
  }
  if (o.dataset) sub("dataset")["kind"] = *o.dataset;
  if (o.input) sub("dataset")["path"] = *o.input;
  if (o.users) sub("dataset")["users"] = *o.users;
  if (o.locations) sub("dataset")["locations"] = *o.locations;
  if (o.items) sub("dataset")["items"] = *o.items;
  if (o.factors) sub("dataset")["factors"] = *o.factors;
  if (o.ratings) sub("dataset")["ratings"] = *o.ratings;
  if (o.mode) sub("stability")["mode"] = *o.mode;
}

Config Resolve(const Json& doc) {
  CheckKeys(doc, "config",
            {"seed", "out_dir", "cache_dir", "dataset", "split", "attribute",
             "recommender", "baseline", "stability", "suppress", "fake",
             "replace", "reduce", "command", "description"});
  Config c;
  auto seed = Find<std::uint64_t>(doc, "config", "seed");
  if (!seed) throw InvalidArgument("a seed is required (config or --seed)");
  c.seed = *seed;
  if (auto v = Find<std::string>(doc, "config", "out_dir")) c.out_dir = *v;
  if (auto v = Find<std::string>(doc, "config", "cache_dir")) c.cache_dir = *v;

  const Json& ds = Section(doc, "dataset");
  CheckKeys(ds, "dataset",
            {"kind", "path", "users", "locations", "items", "factors",
             "ratings"});
  if (auto v = Find<std::string>(ds, "dataset", "kind")) {
    c.dataset.kind = ParseDatasetKind(*v);
  }
  if (auto v = Find<std::string>(ds, "dataset", "path")) c.dataset.path = *v;
  Read(ds, "dataset", "users", c.dataset.users);
  Read(ds, "dataset", "locations", c.dataset.locations);
  Read(ds, "dataset", "items", c.dataset.items);
  Read(ds, "dataset", "factors", c.dataset.factors);
  Read(ds, "dataset", "ratings", c.dataset.ratings);
  const bool from_file = c.dataset.kind == DatasetKind::kCheckins ||
                         c.dataset.kind == DatasetKind::kMovieLens ||
                         c.dataset.kind == DatasetKind::kRatings;
  if (from_file && c.dataset.path.empty()) {
    throw InvalidArgument("dataset.path is required for file datasets");
  }

  const Json& split = Section(doc, "split");
  CheckKeys(split, "split", {"test_fraction"});
  Read(split, "split", "test_fraction", c.test_fraction);
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) {
    throw InvalidArgument("split.test_fraction must lie in (0, 1)");
  }

  const bool checkins = c.dataset.checkins();
  const Json& attr = Section(doc, "attribute");
  CheckKeys(attr, "attribute",
            {"name", "chunks", "kmeans_k", "min_points", "interval_min_frac",
             "interval_max_frac"});
  c.attribute.kind = checkins ? ex::AttributeKind::kDensity
                              : ex::AttributeKind::kRating;
  if (auto v = Find<std::string>(attr, "attribute", "name")) {
    c.attribute.kind = ex::ParseAttribute(*v);
  }
  Read(attr, "attribute", "chunks", c.attribute.chunks);
  Read(attr, "attribute", "kmeans_k", c.attribute.kmeans_k);
  Read(attr, "attribute", "min_points", c.attribute.min_points);
  Read(attr, "attribute", "interval_min_frac", c.attribute.interval_min_frac);
  Read(attr, "attribute", "interval_max_frac", c.attribute.interval_max_frac);
  if (c.attribute.chunks == 0) {
    throw InvalidArgument("attribute.chunks must be >= 1");
  }

  const Json& rec = Section(doc, "recommender");
  CheckKeys(rec, "recommender",
            {"name", "metric", "top_n", "factors", "learning_rate",
             "regularization", "epochs", "init_stddev", "clamp", "clamp_min",
             "clamp_max"});
  auto& r = c.recommender;
  r.kind = checkins ? ex::RecommenderKind::kCosine : ex::RecommenderKind::kMf;
  if (auto v = Find<std::string>(rec, "recommender", "name")) {
    r.kind = ex::ParseRecommender(*v);
  }
  r.metric = r.kind == ex::RecommenderKind::kCosine ? ex::MetricKind::kPrecision
                                                     : ex::MetricKind::kRmse;
  if (auto v = Find<std::string>(rec, "recommender", "metric")) {
    r.metric = ex::ParseMetric(*v);
  }
  Read(rec, "recommender", "top_n", r.top_n);
  Read(rec, "recommender", "factors", r.n_factors);
  Read(rec, "recommender", "learning_rate", r.sgd.learning_rate);
  Read(rec, "recommender", "regularization", r.sgd.regularization);
  Read(rec, "recommender", "epochs", r.sgd.epochs);
  Read(rec, "recommender", "init_stddev", r.sgd.init_stddev);
  Read(rec, "recommender", "clamp", r.clamp);
  Read(rec, "recommender", "clamp_min", r.clamp_min);
  Read(rec, "recommender", "clamp_max", r.clamp_max);
  if (checkins != (r.kind == ex::RecommenderKind::kCosine)) {
    throw InvalidArgument(checkins
                              ? "checkin data needs the cosine recommender"
                              : "rating data needs the mf recommender");
  }
  const bool topn_metric = r.metric == ex::MetricKind::kPrecision ||
                           r.metric == ex::MetricKind::kRecall;
  if (checkins != topn_metric) {
    throw InvalidArgument(checkins
                              ? "checkin data supports metrics precision, recall"
                              : "rating data supports metrics rmse, mae");
  }
  if (r.top_n == 0) throw InvalidArgument("recommender.top_n must be >= 1");

  const Json& base = Section(doc, "baseline");
  CheckKeys(base, "baseline", {"trials", "fraction"});
  Read(base, "baseline", "trials", c.baseline_trials);
  c.baseline_fraction = Find<double>(base, "baseline", "fraction");
  if (c.baseline_fraction) {
    RequireFraction(*c.baseline_fraction, "baseline.fraction", false);
  }

  const Json& stab = Section(doc, "stability");
  CheckKeys(stab, "stability", {"mode", "groups", "folds"});
  Read(stab, "stability", "mode", c.stability_mode);
  Read(stab, "stability", "groups", c.stability_groups);
  Read(stab, "stability", "folds", c.stability_folds);
  if (c.stability_mode != "users" && c.stability_mode != "data") {
    throw InvalidArgument("unknown stability mode '" + c.stability_mode +
                          "'; registered: users, data");
  }

  const Json& sup = Section(doc, "suppress");
  CheckKeys(sup, "suppress", {"alpha", "beta"});
  Read(sup, "suppress", "alpha", c.alphas);
  Read(sup, "suppress", "beta", c.betas);
  for (double a : c.alphas) RequireFraction(a, "suppress.alpha", true);
  for (double b : c.betas) {
    if (!(b >= 0.0)) throw InvalidArgument("suppress.beta must be >= 0");
  }

  const Json& fake = Section(doc, "fake");
  CheckKeys(fake, "fake", {"multiplier", "measure"});
  Read(fake, "fake", "multiplier", c.fake_multiplier);
  if (auto v = Find<std::string>(fake, "fake", "measure")) {
    if (*v == "density") {
      c.fake_measure = obfuscate::FakeMeasure::kDensity;
    } else if (*v == "kmeans") {
      c.fake_measure = obfuscate::FakeMeasure::kKMeans;
    } else {
      throw InvalidArgument("unknown fake measure '" + *v +
                            "'; registered: density, kmeans");
    }
  }

  const Json& rep = Section(doc, "replace");
  CheckKeys(rep, "replace", {"fractions", "beta", "decile"});
  Read(rep, "replace", "fractions", c.replace_fractions);
  Read(rep, "replace", "beta", c.replace_beta);
  c.replace_decile = Find<std::size_t>(rep, "replace", "decile");
  for (double f : c.replace_fractions) {
    RequireFraction(f, "replace.fractions", true);
  }
  if (c.replace_decile &&
      (*c.replace_decile == 0 || *c.replace_decile > c.attribute.chunks)) {
    throw InvalidArgument("replace.decile must lie in [1, attribute.chunks]");
  }

  const Json& red = Section(doc, "reduce");
  CheckKeys(red, "reduce", {"target", "noise_threshold", "time"});
  Read(red, "reduce", "target", c.reduce_target);
  Read(red, "reduce", "noise_threshold", c.reduce_noise_threshold);
  Read(red, "reduce", "time", c.reduce_time);
  RequireFraction(c.reduce_target, "reduce.target", true);
  return c;
}

Json ToJson(const Config& c) {
  Json j = Json::object();
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir.string();
  j["cache_dir"] = c.cache_dir.string();
  const auto& d = c.dataset;
  j["dataset"] = {{"kind", Name(d.kind)},     {"path", d.path.string()},
                  {"users", d.users},         {"locations", d.locations},
                  {"items", d.items},         {"factors", d.factors},
                  {"ratings", d.ratings}};
  j["split"] = {{"test_fraction", c.test_fraction}};
  const auto& a = c.attribute;
  j["attribute"] = {{"name", ex::Name(a.kind)},
                    {"chunks", a.chunks},
                    {"kmeans_k", a.kmeans_k},
                    {"min_points", a.min_points},
                    {"interval_min_frac", a.interval_min_frac},
                    {"interval_max_frac", a.interval_max_frac}};
  const auto& r = c.recommender;
  j["recommender"] = {{"name", ex::Name(r.kind)},
                      {"metric", ex::Name(r.metric)},
                      {"top_n", r.top_n},
                      {"factors", r.n_factors},
                      {"learning_rate", r.sgd.learning_rate},
                      {"regularization", r.sgd.regularization},
                      {"epochs", r.sgd.epochs},
                      {"init_stddev", r.sgd.init_stddev},
                      {"clamp", r.clamp},
                      {"clamp_min", r.clamp_min},
                      {"clamp_max", r.clamp_max}};
  j["baseline"] = {{"trials", c.baseline_trials},
                   {"fraction", OrNull(c.baseline_fraction)}};
  j["stability"] = {{"mode", c.stability_mode},
                    {"groups", c.stability_groups},
                    {"folds", c.stability_folds}};
  j["suppress"] = {{"alpha", c.alphas}, {"beta", c.betas}};
  j["fake"] = {{"multiplier", c.fake_multiplier},
               {"measure", c.fake_measure == obfuscate::FakeMeasure::kDensity
                               ? "density"
                               : "kmeans"}};
  j["replace"] = {{"fractions", c.replace_fractions},
                  {"beta", c.replace_beta},
                  {"decile", OrNull(c.replace_decile)}};
  j["reduce"] = {{"target", c.reduce_target},
                 {"noise_threshold", c.reduce_noise_threshold},
                 {"time", c.reduce_time}};
  return j;
}

}  // namespace dda::cli
