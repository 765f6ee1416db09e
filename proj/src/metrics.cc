// Copyright 2026 The GIMC Authors
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

#include "gimc/metrics.h"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "gimc/embedding_cache.h"

namespace gimc {

using nlohmann::json;

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

MetricsReport prf1(long tp, long fp, long fn) {
  MetricsReport m{tp, fp, fn};
  m.precision = tp + fp == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

double round1(double x) {
  const double scaled = x * 10.0;
  return std::copysign(std::floor(std::fabs(scaled) + 0.5 + 1e-9), scaled) / 10.0;
}

MetricsReport evaluate(const ModelParams& params, const Corpus& corpus,
                       const EmbeddingCache* cache) {
  long tp = 0, fp = 0, fn = 0;
  const ContrastiveConfig unused;
  for (const Document& doc : corpus) {
    const DocumentBatch batch = prepare_batch(doc, params.config, cache);
    const ForwardResult r = forward(params, batch, unused);
    for (size_t p = 0; p < batch.inputs.pairs.size(); ++p) {
      const auto i = static_cast<Eigen::Index>(p);
      const bool predicted = r.probs(i, 0) > r.probs(i, 1);
      const bool gold = batch.inputs.pairs[p].causal;
      tp += predicted && gold;
      fp += predicted && !gold;
      fn += !predicted && gold;
    }
  }
  return prf1(tp, fp, fn);
}

CrossLingualReport summarize_cross_lingual(
    const std::string& source, std::vector<std::pair<std::string, MetricsReport>> targets) {
  CrossLingualReport r;
  r.source = source;
  r.targets = std::move(targets);
  if (r.targets.empty()) return r;
  double sum = 0.0, others = 0.0;
  int n_others = 0;
  std::optional<double> self;
  for (const auto& [lang, m] : r.targets) {
    sum += m.f1;
    if (lang == source) {
      self = m.f1;
    } else {
      others += m.f1;
      ++n_others;
    }
  }
  r.avg = sum / static_cast<double>(r.targets.size());
  if (self) r.delta = n_others == 0 ? 0.0 : *self - others / n_others;
  return r;
}

CrossLingualReport run_cross_lingual(const ModelParams& params, const std::string& source,
                                     const std::vector<std::pair<std::string, Corpus>>& targets) {
  std::vector<std::pair<std::string, MetricsReport>> cells;
  for (const auto& [lang, corpus] : targets) cells.emplace_back(lang, evaluate(params, corpus));
  return summarize_cross_lingual(source, std::move(cells));
}

json metrics_to_json(const MetricsReport& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"precision", m.precision},
          {"recall", m.recall}, {"f1", m.f1}};
}

std::string emit_report(const CrossLingualReport& report, const std::string& format) {
  if (format == "json") {
    json j;
    j["source"] = report.source;
    j["targets"] = json::array();
    for (const auto& [lang, m] : report.targets) {
      json t = metrics_to_json(m);
      t["language"] = lang;
      j["targets"].push_back(std::move(t));
    }
    j["avg"] = report.avg;
    j["delta"] = report.delta ? json(*report.delta) : json(nullptr);
    return j.dump(2) + "\n";
  }
  if (format != "markdown") throw UsageError("unknown report format '" + format + "'");

  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << "| Model |";
  for (const auto& [lang, m] : report.targets) {
    out << ' ' << report.source << "→" << lang << " P | R | F |";
  }
  out << " AVG | Δ |\n|---|";
  for (size_t i = 0; i < report.targets.size(); ++i) out << "---|---|---|";
  out << "---|---|\n";
  if (report.targets.empty()) return out.str();
  out << "| GIMC |";
  for (const auto& [lang, m] : report.targets) {
    out << ' ' << round1(m.precision) << " | " << round1(m.recall) << " | " << round1(m.f1)
        << " |";
  }
  out << ' ' << round1(report.avg) << " | ";
  if (report.delta) {
    out << round1(*report.delta);
  } else {
    out << '-';
  }
  out << " |\n";
  return out.str();
}

CrossLingualReport report_from_json(const json& j) {
  CrossLingualReport r;
  r.source = j.at("source").get<std::string>();
  for (const json& t : j.at("targets")) {
    MetricsReport m;
    m.tp = t.at("tp").get<long>();
    m.fp = t.at("fp").get<long>();
    m.fn = t.at("fn").get<long>();
    m.precision = t.at("precision").get<double>();
    m.recall = t.at("recall").get<double>();
    m.f1 = t.at("f1").get<double>();
    r.targets.emplace_back(t.at("language").get<std::string>(), m);
  }
  r.avg = j.at("avg").get<double>();
  if (!j.at("delta").is_null()) r.delta = j.at("delta").get<double>();
  return r;
}

}  // namespace gimc
