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


// dda: command-line front end for differential data analysis runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "cli_config.h"
#include "dda/attributes.h"
#include "dda/dataset.h"
#include "dda/diffscan.h"
#include "dda/error.h"
#include "dda/experiment.h"
#include "dda/obfuscate.h"
#include "dda/report.h"
#include "dda/seed.h"

namespace {

namespace ex = dda::experiment;
namespace dfs = dda::diffscan;
namespace ob = dda::obfuscate;
using dda::CheckinDataset;
using dda::RatingDataset;
using dda::Seed;
using dda::cli::Config;
using dda::report::Json;
using dda::report::PlotSeries;
using Clock = std::chrono::steady_clock;

Json Number(double v) {
  if (std::isfinite(v)) return v;
  return dda::report::FormatDouble(v);
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Run {
  std::string command;
  Config cfg;
  Json config_echo;
  Json outputs = Json::object();
  Json plans;
  Json timings = Json::object();
  std::vector<PlotSeries> plots;
  std::unique_ptr<ex::ModelCache> cache;
  std::vector<std::filesystem::path> written;

  Seed root() const { return Seed(cfg.seed); }
  std::filesystem::path Out(const char* file) const {
    return cfg.out_dir / file;
  }

  // Runs f, charging its wall time to `name` and prefixing any error with it.
  template <class F>
  auto Stage(const char* name, F&& f) -> decltype(f()) {
    struct Timer {
      Json& timings;
      const char* name;
      Clock::time_point start = Clock::now();
      ~Timer() {
        const double s =
            std::chrono::duration<double>(Clock::now() - start).count();
        timings[name] = timings.value(name, 0.0) + s;
      }
    } timer{timings, name};
    try {
      return f();
    } catch (const dda::Error& e) {
      throw dda::Error(e.kind(), std::string(name) + ": " + e.what());
    } catch (const std::bad_alloc&) {
      throw dda::RuntimeError(std::string(name) + ": out of memory");
    } catch (const std::exception& e) {
      throw dda::RuntimeError(std::string(name) + ": " + e.what());
    }
  }
};

using AnyDataset = std::variant<CheckinDataset, RatingDataset>;

AnyDataset Load(const dda::cli::DatasetConfig& d, Seed seed) {
  using dda::cli::DatasetKind;
  switch (d.kind) {
    case DatasetKind::kCity: {
      dda::CityParams params;
      params.n_users = d.users;
      params.n_locations = d.locations;
      return dda::GenerateCity(params, seed.Derive("city"));
    }
    case DatasetKind::kCheckins:
      return dda::LoadCheckins(d.path);
    case DatasetKind::kMovieLens:
      return dda::LoadMovieLens(d.path);
    case DatasetKind::kRatings:
      return dda::LoadRatingsCsv(d.path);
    case DatasetKind::kSynthetic:
      return dda::GenerateSynthetic(d.users, d.items, d.factors, d.ratings,
                                    seed.Derive("synthetic"));
  }
  throw dda::InvalidArgument("unhandled dataset kind");
}

void WriteData(const std::filesystem::path& path, const CheckinDataset& ds) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  dda::WriteCheckinsCsv(ds, out);
  if (!out) throw dda::RuntimeError("cannot write " + path.string());
}

void WriteData(const std::filesystem::path& path, const RatingDataset& ds) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  dda::WriteRatingsCsv(ds, out);
  if (!out) throw dda::RuntimeError("cannot write " + path.string());
}

const char* DataFileName(const CheckinDataset&) { return "checkins.csv"; }
const char* DataFileName(const RatingDataset&) { return "ratings.csv"; }

template <class Data>
Json Summary(const Data& ds) {
  Json j = Json::object();
  j["points"] = ds.size();
  j["users"] = ds.num_users();
  j["items"] = ds.num_items();
  j["active_users"] = ds.ActiveUsers().size();
  j["distinct_items"] = ds.DistinctItems().size();
  j["content_hash"] = Hex(dda::ContentHash(ds));
  return j;
}

dfs::Scorer<CheckinDataset> MakeScorer(Run& run, const CheckinDataset& test,
                                       Seed) {
  return ex::MakeScorer(test, run.cfg.recommender);
}

dfs::Scorer<RatingDataset> MakeScorer(Run& run, const RatingDataset& test,
                                      Seed seed) {
  return ex::MakeScorer(test, run.cfg.recommender, seed, run.cache.get());
}

template <class Data>
struct Prepared {
  dda::SplitPair<typename Data::point_type> split;
  dfs::Scorer<Data> scorer;
  double full = 0.0;
};

template <class Data>
Prepared<Data> Prepare(Run& run, const Data& data, Seed seed) {
  Prepared<Data> p;
  p.split = run.Stage("split", [&] {
    return dda::HoldoutSplit(data, run.cfg.test_fraction, seed.Derive("split"));
  });
  p.scorer = run.Stage(
      "train", [&] { return MakeScorer(run, p.split.test, seed.Derive("model")); });
  p.full = run.Stage("score", [&] { return p.scorer.score(p.split.train); });
  return p;
}

template <class Data>
struct Halves {
  Prepared<Data> a;
  Prepared<Data> b;
};

template <class Data>
Halves<Data> MakeHalves(Run& run, const Data& data) {
  auto [half_a, half_b] = run.Stage(
      "split", [&] { return dda::HalfSplit(data, run.root().Derive("half")); });
  return {Prepare(run, half_a, run.root().Derive("a")),
          Prepare(run, half_b, run.root().Derive("b"))};
}

template <class Data>
dda::attributes::ChunkPartition Partition(Run& run, const Data& train,
                                          Seed seed) {
  return run.Stage("partition", [&] {
    return ex::BuildPartition(train, run.cfg.attribute, seed);
  });
}

struct Scan {
  dfs::DifferentialResult diff;
  dfs::ZScoreTable z;
};

template <class Data>
Scan Differential(Run& run, const Data& train,
                  const dda::attributes::ChunkPartition& part,
                  const dfs::Scorer<Data>& scorer) {
  Scan s;
  s.diff = run.Stage("diff",
                     [&] { return dfs::DifferentialRun(train, part, scorer); });
  s.z = run.Stage("zscore", [&] { return dfs::ZScores(s.diff); });
  return s;
}

std::vector<double> Iota(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = double(i + 1);
  return x;
}

PlotSeries Flat(std::string name, std::size_t n, double y) {
  return {std::move(name), Iota(n), std::vector<double>(n, y)};
}

double MeanChunkShare(const dfs::DifferentialResult& d) {
  if (d.size() == 0 || d.train_size == 0) return 0.0;
  double total = 0.0;
  for (std::size_t c : d.chunk_sizes) total += double(c);
  return total / (double(d.size()) * double(d.train_size));
}

void AddChunkPlots(Run& run, const Scan& s,
                   const dfs::BaselineStats* base = nullptr) {
  const std::size_t n = s.diff.size();
  run.plots.push_back({s.diff.metric.name, Iota(n), s.diff.accuracy});
  run.plots.push_back(Flat("full", n, s.diff.full_accuracy));
  if (base != nullptr) {
    run.plots.push_back(Flat("baseline", n, base->mean));
    run.plots.push_back(Flat("baseline-sd", n, base->mean - base->stddev));
    run.plots.push_back(Flat("baseline+sd", n, base->mean + base->stddev));
  }
}

// ---- subcommands -----------------------------------------------------------

template <class Data>
void Ingest(Run& run, const Data& data) {
  run.outputs["dataset"] = Summary(data);
}

template <class Data>
void Split(Run& run, const Data& data) {
  const auto split = run.Stage("split", [&] {
    return dda::HoldoutSplit(data, run.cfg.test_fraction,
                             run.root().Derive("split"));
  });
  run.Stage("write", [&] {
    WriteData(run.Out("train.csv"), split.train);
    WriteData(run.Out("test.csv"), split.test);
  });
  run.written.push_back(run.Out("train.csv"));
  run.written.push_back(run.Out("test.csv"));
  run.outputs["train"] = Summary(split.train);
  run.outputs["test"] = Summary(split.test);
}

template <class Data>
void Diff(Run& run, const Data& data, bool with_baseline) {
  const auto p = Prepare(run, data, run.root());
  const auto part = Partition(run, p.split.train, run.root().Derive("partition"));
  const Scan s = Differential(run, p.split.train, part, p.scorer);
  std::optional<dfs::BaselineStats> base;
  if (with_baseline && run.cfg.baseline_trials > 0) {
    const double fraction =
        run.cfg.baseline_fraction.value_or(MeanChunkShare(s.diff));
    base = run.Stage("baseline", [&] {
      return dfs::RandomRemovalBaseline(p.split.train, fraction,
                                        run.cfg.baseline_trials, p.scorer,
                                        run.root().Derive("baseline"));
    });
  }
  const dfs::BaselineStats* bp = base ? &*base : nullptr;
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), s.z,
                                s.diff.full_accuracy, bp);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["differential"] = dda::report::ToJson(s.diff);
  run.outputs["zscores"] = dda::report::ToJson(s.z);
  if (bp != nullptr) run.outputs["baseline"] = dda::report::ToJson(*bp);
  AddChunkPlots(run, s, bp);
}

template <class Data>
void Baseline(Run& run, const Data& data) {
  const auto p = Prepare(run, data, run.root());
  const double fraction = run.cfg.baseline_fraction.value_or(
      1.0 / double(run.cfg.attribute.chunks));
  const auto base = run.Stage("baseline", [&] {
    return dfs::RandomRemovalBaseline(p.split.train, fraction,
                                      run.cfg.baseline_trials, p.scorer,
                                      run.root().Derive("baseline"));
  });
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), dfs::ZScoreTable{},
                                p.full, &base);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["full_accuracy"] = Number(p.full);
  run.outputs["baseline"] = dda::report::ToJson(base);
  run.plots.push_back({"trials", Iota(base.trials.size()), base.trials});
}

template <class Data>
void Stability(Run& run, const Data& data) {
  const dfs::ExperimentFn<Data> experiment = [&run](const Data& train,
                                                    const Data& test, Seed s) {
    const auto scorer = MakeScorer(run, test, s.Derive("model"));
    const auto part =
        ex::BuildPartition(train, run.cfg.attribute, s.Derive("partition"));
    return dfs::DifferentialRun(train, part, scorer);
  };
  const Seed seed = run.root().Derive("stability");
  const auto rep = run.Stage("stability", [&] {
    return run.cfg.stability_mode == "users"
               ? dfs::StabilityByUsers(data, run.cfg.stability_groups,
                                       run.cfg.test_fraction, experiment, seed)
               : dfs::StabilityByData(data, run.cfg.stability_folds,
                                      experiment, seed);
  });
  for (std::size_t k = 0; k < rep.centered.size(); ++k) {
    run.plots.push_back({"run-" + std::to_string(k + 1),
                         Iota(rep.centered[k].size()), rep.centered[k]});
  }
  run.outputs["stability"] = dda::report::ToJson(rep);
}

template <class Data>
void SuppressCmd(Run& run, const Data& data) {
  const auto h = MakeHalves(run, data);
  const auto part_a = Partition(run, h.a.split.train, run.root().Derive("partition-a"));
  const Scan s = Differential(run, h.a.split.train, part_a, h.a.scorer);
  const auto part_b = Partition(run, h.b.split.train, run.root().Derive("partition-b"));
  run.plans = Json::array();
  for (double beta : run.cfg.betas) {
    PlotSeries series{"beta=" + dda::report::FormatDouble(beta), {}, {}};
    for (std::size_t i = 0; i < run.cfg.alphas.size(); ++i) {
      const double alpha = run.cfg.alphas[i];
      const auto plan = run.Stage("suppress", [&] {
        return ob::BuildSuppressionPlan(s.z, alpha, beta);
      });
      const auto sup = run.Stage("suppress", [&] {
        return ob::Suppress(h.b.split.train, part_b, plan,
                            run.root().Derive("suppress").Derive(i));
      });
      const double acc =
          run.Stage("score", [&] { return h.b.scorer.score(sup.data); });
      series.x.push_back(alpha);
      series.y.push_back(acc);
      Json j = dda::report::ToJson(plan);
      j["removed"] = sup.removed;
      j["accuracy"] = Number(acc);
      run.plans.push_back(std::move(j));
    }
    run.plots.push_back(std::move(series));
  }
  run.plots.push_back({"full", run.cfg.alphas,
                       std::vector<double>(run.cfg.alphas.size(), h.b.full)});
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), s.z,
                                s.diff.full_accuracy);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["half_a"] = {{"differential", dda::report::ToJson(s.diff)},
                           {"zscores", dda::report::ToJson(s.z)}};
  run.outputs["half_b"] = {{"points", h.b.split.train.size()},
                           {"full_accuracy", Number(h.b.full)}};
}

ob::FakePool MakePool(Run& run, const CheckinDataset& train, Seed seed) {
  return run.Stage("fake", [&] {
    return ob::GenerateFake(train, run.cfg.fake_multiplier,
                            run.cfg.fake_measure, run.cfg.attribute.chunks,
                            seed, run.cfg.attribute.kmeans_k);
  });
}

void Fake(Run& run, const CheckinDataset& data) {
  const auto p = Prepare(run, data, run.root());
  const auto pool = MakePool(run, p.split.train, run.root().Derive("fake"));
  Scan s;
  s.diff = run.Stage("diff", [&] {
    return ob::DifferentialFakeRun(p.split.train, pool, p.scorer);
  });
  s.z = run.Stage("zscore", [&] { return dfs::ZScores(s.diff); });
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), s.z,
                                s.diff.full_accuracy);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["fakes"] = pool.fakes.size();
  run.outputs["with_replacement_users"] = pool.with_replacement_users.size();
  run.outputs["differential"] = dda::report::ToJson(s.diff);
  run.outputs["zscores"] = dda::report::ToJson(s.z);
  AddChunkPlots(run, s);
}

void ReplaceCmd(Run& run, const CheckinDataset& data) {
  const auto h = MakeHalves(run, data);
  const auto part_a = Partition(run, h.a.split.train, run.root().Derive("partition-a"));
  const Scan s = Differential(run, h.a.split.train, part_a, h.a.scorer);
  const auto part_b = Partition(run, h.b.split.train, run.root().Derive("partition-b"));
  const auto pool = MakePool(run, h.b.split.train, run.root().Derive("fake"));
  const std::size_t n = run.cfg.attribute.chunks;
  std::size_t decile = run.cfg.replace_decile.value_or(0);
  if (decile == 0) {
    const auto pool_a = MakePool(run, h.a.split.train, run.root().Derive("fake-a"));
    const auto fake_a = run.Stage("diff", [&] {
      return ob::DifferentialFakeRun(h.a.split.train, pool_a, h.a.scorer);
    });
    const bool higher = fake_a.metric.higher_is_better;
    std::size_t best = 0;
    for (std::size_t d = 1; d < fake_a.size(); ++d) {
      const double a = fake_a.accuracy[d];
      const double b = fake_a.accuracy[best];
      if (higher ? a > b : a < b) best = d;
    }
    decile = best + 1;
    run.outputs["half_a_fakes"] = dda::report::ToJson(fake_a);
  }
  run.outputs["fake_decile"] = decile;
  const auto choice = ob::FakeChoice::Single(n, decile - 1);
  PlotSeries smart{"intelligent", {}, {}};
  PlotSeries random{"random", {}, {}};
  run.plans = Json::array();
  for (std::size_t i = 0; i < run.cfg.replace_fractions.size(); ++i) {
    const double f = run.cfg.replace_fractions[i];
    const Seed seed = run.root().Derive("replace").Derive(i);
    ob::ReplaceStats smart_stats;
    ob::ReplaceStats random_stats;
    const auto a = run.Stage("replace", [&] {
      return ob::Replace(h.b.split.train, part_b, s.z, pool, choice, f,
                         run.cfg.replace_beta, seed, &smart_stats);
    });
    const auto b = run.Stage("replace", [&] {
      return ob::RandomReplace(h.b.split.train, part_b, pool, f, seed,
                               &random_stats);
    });
    const double acc_a = run.Stage("score", [&] { return h.b.scorer.score(a); });
    const double acc_b = run.Stage("score", [&] { return h.b.scorer.score(b); });
    smart.x.push_back(f);
    smart.y.push_back(acc_a);
    random.x.push_back(f);
    random.y.push_back(acc_b);
    Json j = Json::object();
    j["fraction"] = f;
    j["removed"] = smart_stats.removed;
    j["added"] = smart_stats.added;
    j["added_from_other_users"] = smart_stats.added_from_other_users;
    j["accuracy"] = Number(acc_a);
    j["random_accuracy"] = Number(acc_b);
    j["plan"] = dda::report::ToJson(smart_stats.plan);
    run.plans.push_back(std::move(j));
  }
  run.plots.push_back(std::move(smart));
  run.plots.push_back(std::move(random));
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), s.z,
                                s.diff.full_accuracy);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["half_a"] = {{"differential", dda::report::ToJson(s.diff)},
                           {"zscores", dda::report::ToJson(s.z)}};
  run.outputs["half_b"] = {{"points", h.b.split.train.size()},
                           {"full_accuracy", Number(h.b.full)},
                           {"fakes", pool.fakes.size()}};
}

template <class Data>
void Reduce(Run& run, const Data& data) {
  if (run.cfg.attribute.kind == ex::AttributeKind::kTime) {
    throw dda::InvalidArgument(
        "config: reduce ranks hardship chunks; pick a non-time attribute");
  }
  const auto h = MakeHalves(run, data);
  const Seed seed = run.root();
  std::optional<dda::attributes::ChunkPartition> time_a;
  std::optional<dda::attributes::ChunkPartition> time_b;
  std::optional<dfs::ZScoreTable> z_time;
  if constexpr (std::is_same_v<Data, CheckinDataset>) {
    if (run.cfg.reduce_time) {
      ex::AttributeConfig tc = run.cfg.attribute;
      tc.kind = ex::AttributeKind::kTime;
      std::vector<dda::attributes::TimeInterval> intervals;
      time_a = run.Stage("partition", [&] {
        return ex::BuildPartition(h.a.split.train, tc, seed.Derive("time"),
                                  &intervals);
      });
      z_time = Differential(run, h.a.split.train, *time_a, h.a.scorer).z;
      time_b = run.Stage("partition", [&] {
        return ex::BuildPartition(h.b.split.train, tc, seed.Derive("time"),
                                  nullptr, &intervals);
      });
    }
  }
  const auto part_a = Partition(run, h.a.split.train, seed.Derive("partition-a"));
  const Scan s = Differential(run, h.a.split.train, part_a, h.a.scorer);
  const auto part_b = Partition(run, h.b.split.train, seed.Derive("partition-b"));
  const auto plan = run.Stage("plan", [&] {
    return ob::BuildReductionPlan(z_time ? &*z_time : nullptr,
                                  time_a ? &*time_a : nullptr, s.z, part_a,
                                  run.cfg.reduce_target,
                                  run.cfg.reduce_noise_threshold);
  });
  PlotSeries curve{s.diff.metric.name, {0.0}, {h.b.full}};
  double removed = 0.0;
  double final_acc = h.b.full;
  for (std::size_t k = 1; k <= plan.steps.size(); ++k) {
    ob::ReductionPlan prefix = plan;
    prefix.steps.resize(k);
    const auto reduced = run.Stage("reduce", [&] {
      return ob::ApplyReduction(h.b.split.train, prefix,
                                time_b ? &*time_b : nullptr, part_b);
    });
    removed = reduced.cumulative_fraction.empty()
                  ? 0.0
                  : reduced.cumulative_fraction.back();
    final_acc = run.Stage("score", [&] { return h.b.scorer.score(reduced.data); });
    curve.x.push_back(removed);
    curve.y.push_back(final_acc);
  }
  run.plots.push_back(std::move(curve));
  run.plans = dda::report::ToJson(plan);
  run.Stage("write", [&] {
    dda::report::WriteResultCsv(run.Out("result.csv"), s.z,
                                s.diff.full_accuracy);
  });
  run.written.push_back(run.Out("result.csv"));
  run.outputs["half_a"] = {{"zscores", dda::report::ToJson(s.z)}};
  if (z_time) run.outputs["half_a"]["time_zscores"] = dda::report::ToJson(*z_time);
  run.outputs["half_b"] = {
      {"points", h.b.split.train.size()},
      {"full_accuracy", Number(h.b.full)},
      {"removed_fraction", Number(removed)},
      {"reduced_accuracy", Number(final_acc)},
      {"relative_change", Number((final_acc - h.b.full) / h.b.full)}};
}

template <class Data>
void Synth(Run& run, const Data& data) {
  const auto path = run.Out(DataFileName(data));
  run.Stage("write", [&] { WriteData(path, data); });
  run.written.push_back(path);
  run.outputs["dataset"] = Summary(data);
}

// ---- report emission --------------------------------------------------------

Json PlotsJson(const std::vector<PlotSeries>& plots) {
  Json arr = Json::array();
  for (const auto& s : plots) {
    Json x = Json::array();
    Json y = Json::array();
    for (double v : s.x) x.push_back(Number(v));
    for (double v : s.y) y.push_back(Number(v));
    arr.push_back({{"name", s.name}, {"x", std::move(x)}, {"y", std::move(y)}});
  }
  return arr;
}

double AsDouble(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return std::strtod(v.get<std::string>().c_str(), nullptr);
  throw dda::InvalidArgument("plot value is neither number nor string");
}

std::vector<PlotSeries> PlotsFromJson(const Json& arr) {
  if (!arr.is_array()) throw dda::InvalidArgument("report has no plots array");
  std::vector<PlotSeries> out;
  for (const Json& s : arr) {
    PlotSeries p;
    p.name = s.at("name").get<std::string>();
    for (const Json& v : s.at("x")) p.x.push_back(AsDouble(v));
    for (const Json& v : s.at("y")) p.y.push_back(AsDouble(v));
    if (p.x.size() != p.y.size()) {
      throw dda::InvalidArgument("plot series '" + p.name +
                                 "' has unequal x and y lengths");
    }
    out.push_back(std::move(p));
  }
  return out;
}

void Finish(Run& run) {
  run.Stage("write", [&] {
    if (!run.plots.empty()) {
      dda::report::WritePlotCsv(run.Out("plot.csv"), run.plots);
      run.written.push_back(run.Out("plot.csv"));
    }
    if (!run.plans.is_null()) {
      dda::report::WriteJson(run.Out("plan.json"), run.plans);
      run.written.push_back(run.Out("plan.json"));
    }
    Json doc = Json::object();
    doc["command"] = run.command;
    doc["config"] = run.config_echo;
    doc["resolved_config"] = dda::cli::ToJson(run.cfg);
    doc["outputs"] = run.outputs;
    if (!run.plans.is_null()) doc["plans"] = run.plans;
    doc["plots"] = PlotsJson(run.plots);
    if (run.cache) {
      doc["model_cache"] = {{"hits", run.cache->hits()},
                            {"misses", run.cache->misses()}};
    }
    doc["timings_seconds"] = run.timings;
    dda::report::WriteJson(run.Out("report.json"), doc);
    run.written.push_back(run.Out("report.json"));
  });
}

void Dispatch(Run& run, const AnyDataset& any) {
  const std::string& c = run.command;
  std::visit(
      [&](const auto& data) {
        using Data = std::decay_t<decltype(data)>;
        if (c == "ingest") {
          Ingest(run, data);
        } else if (c == "split") {
          Split(run, data);
        } else if (c == "diff") {
          Diff(run, data, true);
        } else if (c == "zscore") {
          Diff(run, data, false);
        } else if (c == "baseline") {
          Baseline(run, data);
        } else if (c == "stability") {
          Stability(run, data);
        } else if (c == "suppress") {
          SuppressCmd(run, data);
        } else if (c == "reduce") {
          Reduce(run, data);
        } else if (c == "synth") {
          Synth(run, data);
        } else if constexpr (std::is_same_v<Data, CheckinDataset>) {
          if (c == "fake") Fake(run, data);
          if (c == "replace") ReplaceCmd(run, data);
        } else {
          throw dda::InvalidArgument("config: " + c + " needs checkin data");
        }
      },
      any);
}

int ExitCode(dda::ErrorKind kind) {
  switch (kind) {
    case dda::ErrorKind::kInvalidArgument:
      return 2;
    case dda::ErrorKind::kDataset:
      return 3;
    case dda::ErrorKind::kRuntime:
      return 1;
  }
  return 1;
}

int Execute(const std::string& command, const std::string& config_path,
            const dda::cli::Overrides& overrides) {
  Run run;
  run.command = command;

  if (command == "report") {
    run.Stage("config", [&] {
      if (!overrides.input) {
        throw dda::InvalidArgument("report needs --input <report.json>");
      }
    });
    const Json doc = run.Stage("load", [&] {
      std::ifstream in(*overrides.input);
      if (!in) throw dda::DatasetError("cannot open " + *overrides.input);
      try {
        return Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw dda::DatasetError(*overrides.input + ": " + e.what());
      }
    });
    run.cfg.out_dir = overrides.out_dir
                          ? std::filesystem::path(*overrides.out_dir)
                          : std::filesystem::path(*overrides.input).parent_path();
    run.plots = run.Stage("load", [&] {
      auto it = doc.find("plots");
      if (it == doc.end()) throw dda::DatasetError("report has no plots");
      try {
        return PlotsFromJson(*it);
      } catch (const dda::Error& e) {
        throw dda::DatasetError(e.what());
      } catch (const nlohmann::json::exception& e) {
        throw dda::DatasetError(e.what());
      }
    });
    run.Stage("write", [&] {
      dda::report::WritePlotCsv(run.Out("plot.csv"), run.plots);
    });
    std::printf("wrote %s\n", run.Out("plot.csv").string().c_str());
    return 0;
  }

  run.config_echo = run.Stage("config", [&] {
    Json doc = config_path.empty() ? Json::object()
                                   : dda::cli::ReadConfigFile(config_path);
    dda::cli::ApplyOverrides(overrides, doc);
    return doc;
  });
  run.cfg = run.Stage("config", [&] {
    auto it = run.config_echo.find("command");
    if (it != run.config_echo.end() && *it != command) {
      throw dda::InvalidArgument("config is for '" + it->dump() +
                                 "', not '" + command + "'");
    }
    return dda::cli::Resolve(run.config_echo);
  });
  if (command == "synth" && run.cfg.dataset.kind != dda::cli::DatasetKind::kCity &&
      run.cfg.dataset.kind != dda::cli::DatasetKind::kSynthetic) {
    throw dda::InvalidArgument(
        "config: synth generates city or synthetic datasets only");
  }
  if (!run.cfg.cache_dir.empty()) {
    run.cache = std::make_unique<ex::ModelCache>(run.cfg.cache_dir);
  }
  const AnyDataset data =
      run.Stage("load", [&] { return Load(run.cfg.dataset, run.root()); });
  Dispatch(run, data);
  Finish(run);
  for (const auto& p : run.written) std::printf("wrote %s\n", p.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential data analysis for recommender systems"};
  app.require_subcommand(1);
  std::string config_path;
  dda::cli::Overrides o;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"ingest", "Load a dataset and summarize it"},
      {"split", "Write a per-user holdout train/test split"},
      {"diff", "Chunk ablation with z-scores and a random-removal baseline"},
      {"zscore", "Chunk ablation and z-scores only"},
      {"baseline", "Random-removal baseline at a fixed fraction"},
      {"stability", "Repeat the ablation over user groups or data folds"},
      {"suppress", "Z-score-weighted suppression across alpha and beta"},
      {"fake", "Ablation of fake checkin deciles added to the data"},
      {"replace", "Intelligent versus random replacement with fakes"},
      {"reduce", "Drop hurtful chunks toward a target data reduction"},
      {"synth", "Generate a synthetic dataset and write it as CSV"},
      {"report", "Re-emit plot CSVs from a report.json"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", o.seed, "Root seed");
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--metric", o.metric, "precision | recall | rmse | mae");
    sub->add_option("--top-n", o.top_n, "List length for top-N metrics");
    sub->add_option("--chunks", o.chunks, "Chunks per user");
    sub->add_option("--alpha", o.alpha, "Suppression levels")->delimiter(',');
    sub->add_option("--beta", o.beta, "Z-score sharpness")->delimiter(',');
    sub->add_option("--attribute", o.attribute,
                    "kmeans | density | time | rating");
    sub->add_option("--recommender", o.recommender, "cosine | mf");
    sub->add_option("--dataset", o.dataset,
                    "city | checkins | movielens | ratings | synthetic");
    sub->add_option("--input", o.input, "Dataset path (report: report.json)");
    sub->add_option("--users", o.users, "Synthetic user count");
    sub->add_option("--locations", o.locations, "City location count");
    sub->add_option("--items", o.items, "Synthetic item count");
    sub->add_option("--factors", o.factors, "Latent factor count");
    sub->add_option("--ratings", o.ratings, "Synthetic rating count");
    sub->add_option("--mode", o.mode, "Stability mode: users | data");
    sub->add_option("--cache-dir", o.cache_dir, "MF model cache directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Execute(command, config_path, o);
  } catch (const dda::Error& e) {
    std::fprintf(stderr, "dda %s: %s\n", command.c_str(), e.what());
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dda %s: %s\n", command.c_str(), e.what());
    return 1;
  }
}
