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

#ifndef GIMC_METRICS_H_
#define GIMC_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gimc/corpus.h"
#include "gimc/model.h"
#include "json.hpp"

namespace gimc {

// Percentages; any zero denominator yields 0.
struct MetricsReport {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

MetricsReport prf1(long tp, long fp, long fn);

// Harmonic mean of two percentages (0 when both are 0).
double f1_score(double precision, double recall);

// Half-up rounding to one decimal. Values a few ulps below a .x5 boundary
// (58.8 - 48.45 = 10.3499999...) round up.
double round1(double x);

// Argmax of the pair classifier for every candidate pair, micro-averaged
// over documents. Ties go to "none".
MetricsReport evaluate(const ModelParams& params, const Corpus& corpus,
                       const EmbeddingCache* cache = nullptr);

struct CrossLingualReport {
  std::string source;
  std::vector<std::pair<std::string, MetricsReport>> targets;  // in given order
  double avg = 0.0;
  std::optional<double> delta;  // absent without a source->source cell
};

// avg = mean F1 over all targets, source included; delta = source F1 minus
// mean F1 of the other targets (0 when the source is the only target).
CrossLingualReport summarize_cross_lingual(
    const std::string& source, std::vector<std::pair<std::string, MetricsReport>> targets);

CrossLingualReport run_cross_lingual(const ModelParams& params, const std::string& source,
                                     const std::vector<std::pair<std::string, Corpus>>& targets);

// format: "json" (full precision) or "markdown" (one-decimal grid).
std::string emit_report(const CrossLingualReport& report, const std::string& format);
CrossLingualReport report_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const MetricsReport& m);

}  // namespace gimc

#endif  // GIMC_METRICS_H_
