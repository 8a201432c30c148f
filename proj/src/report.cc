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

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dda/error.h"

namespace dda::report {

namespace {

// JSON has no NaN or infinity; those are written as strings.
Json Num(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

Json Nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(Num(x));
  return a;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path.string());
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json ToJson(const diffscan::DifferentialResult& r) {
  Json j;
  j["attribute"] = r.attribute;
  j["metric"] = r.metric.name;
  j["higher_is_better"] = r.metric.higher_is_better;
  j["full_accuracy"] = Num(r.full_accuracy);
  j["train_size"] = r.train_size;
  Json chunks = Json::array();
  for (std::size_t c = 0; c < r.size(); ++c) {
    chunks.push_back({{"label", r.labels[c]},
                      {"accuracy", Num(r.accuracy[c])},
                      {"size", r.chunk_sizes[c]},
                      {"emptied_users", r.emptied_users[c]}});
  }
  j["chunks"] = std::move(chunks);
  return j;
}

Json ToJson(const diffscan::ZScoreTable& t) {
  Json j;
  j["attribute"] = t.attribute;
  j["metric"] = t.metric;
  j["negated"] = t.negated;
  j["mean"] = Num(t.mean);
  j["sigma"] = Num(t.sigma);
  j["degenerate"] = t.degenerate;
  Json chunks = Json::array();
  for (std::size_t c = 0; c < t.size(); ++c) {
    chunks.push_back({{"label", t.labels[c]},
                      {"accuracy", Num(t.accuracy[c])},
                      {"z", Num(t.z[c])},
                      {"fraction", Num(t.chunk_fractions[c])}});
  }
  j["chunks"] = std::move(chunks);
  return j;
}

Json ToJson(const diffscan::BaselineStats& b) {
  return {{"fraction", Num(b.fraction)},
          {"n_trials", b.n_trials},
          {"mean", Num(b.mean)},
          {"stddev", Num(b.stddev)},
          {"trials", Nums(b.trials)}};
}

Json ToJson(const diffscan::StabilityReport& s) {
  Json j;
  j["kind"] = s.kind;
  j["offsets"] = Nums(s.offsets);
  Json centered = Json::array();
  for (const auto& row : s.centered) centered.push_back(Nums(row));
  j["centered"] = std::move(centered);
  Json runs = Json::array();
  for (const auto& r : s.runs) runs.push_back(ToJson(r));
  j["runs"] = std::move(runs);
  return j;
}

Json ToJson(const obfuscate::SuppressionPlan& p) {
  Json j;
  j["alpha"] = Num(p.alpha);
  j["beta"] = Num(p.beta);
  j["k"] = Num(p.k);
  j["mean_p"] = Num(p.MeanP());
  j["clamping_loss"] = Num(p.clamping_loss);
  Json chunks = Json::array();
  for (std::size_t c = 0; c < p.labels.size(); ++c) {
    chunks.push_back({{"label", p.labels[c]},
                      {"z", Num(p.z[c])},
                      {"t", Num(p.t[c])},
                      {"p_hat", Num(p.p_hat[c])},
                      {"p", Num(p.p[c])}});
  }
  j["chunks"] = std::move(chunks);
  return j;
}

Json ToJson(const obfuscate::ReductionPlan& p) {
  Json j;
  j["target_fraction"] = Num(p.target_fraction);
  j["noise_threshold"] = Num(p.noise_threshold);
  Json steps = Json::array();
  for (const auto& s : p.steps) {
    steps.push_back(
        {{"kind", s.kind == obfuscate::ReductionStep::Kind::kInterval
                      ? "interval"
                      : "chunk"},
         {"chunk", s.chunk},
         {"label", s.label},
         {"z", Num(s.z)},
         {"fraction", Num(s.fraction)},
         {"cumulative", Num(s.cumulative)}});
  }
  j["steps"] = std::move(steps);
  return j;
}

void WriteResultCsv(const std::filesystem::path& path,
                    const diffscan::ZScoreTable& table, double full_accuracy,
                    const diffscan::BaselineStats* baseline) {
  std::ofstream out = OpenOut(path);
  out << "chunk,accuracy,zscore\n";
  for (std::size_t c = 0; c < table.size(); ++c) {
    out << CsvField(table.labels[c]) << ',' << FormatDouble(table.accuracy[c])
        << ',' << FormatDouble(table.z[c]) << '\n';
  }
  out << "full," << FormatDouble(full_accuracy) << ",\n";
  if (baseline != nullptr) {
    out << "baseline," << FormatDouble(baseline->mean) << ','
        << FormatDouble(baseline->stddev) << '\n';
  }
}

void WritePlotCsv(const std::filesystem::path& path,
                  const std::vector<PlotSeries>& series) {
  std::ofstream out = OpenOut(path);
  out << "x,y,series\n";
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw InvalidArgument("plot series '" + s.name + "' has unequal x/y");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << FormatDouble(s.x[i]) << ',' << FormatDouble(s.y[i]) << ','
          << CsvField(s.name) << '\n';
    }
  }
}

void WriteJson(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out = OpenOut(path);
  out << doc.dump(2) << '\n';
}

}  // namespace dda::report
