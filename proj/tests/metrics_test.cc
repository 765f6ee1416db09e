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


#include <cmath>

#include "doctest.h"
#include "fixtures.h"
#include "gimc/metrics.h"

using namespace gimc;

namespace {

MetricsReport with_f1(double f1) {
  MetricsReport m;
  m.f1 = f1;
  return m;
}

CrossLingualReport table_row(const std::vector<double>& f1) {
  const std::vector<std::string> langs = {"en", "da", "es", "tr", "ur"};
  std::vector<std::pair<std::string, MetricsReport>> t;
  for (size_t i = 0; i < f1.size(); ++i) t.emplace_back(langs[i], with_f1(f1[i]));
  return summarize_cross_lingual("en", t);
}

}  // namespace

TEST_CASE("rounding") {
  CHECK(round1(58.8 - 48.45) == 10.4);
  CHECK(round1(0.05) == 0.1);
  CHECK(round1(0.04999) == 0.0);
  CHECK(round1(60.6849) == 60.7);
  CHECK(round1(-1.25) == -1.3);
  CHECK(round1(100.0) == 100.0);
}

TEST_CASE("precision, recall and F1") {
  CHECK(round1(f1_score(64.9, 57.0)) == 60.7);
  CHECK(round1(f1_score(35.6, 44.9)) == 39.7);
  CHECK(f1_score(0.0, 0.0) == 0.0);

  const MetricsReport m = prf1(3, 1, 2);
  CHECK(m.precision == doctest::Approx(75.0));
  CHECK(m.recall == doctest::Approx(60.0));
  CHECK(m.f1 == doctest::Approx(2.0 * 75.0 * 60.0 / 135.0));

  for (long fp : {0L, 4L}) {
    for (long fn : {0L, 7L}) {
      const MetricsReport z = prf1(0, fp, fn);
      CHECK(z.precision == 0.0);
      CHECK(z.recall == 0.0);
      CHECK(z.f1 == 0.0);
    }
  }
  CHECK(prf1(5, 0, 0).f1 == doctest::Approx(100.0));
}

TEST_CASE("cross-lingual summary") {
  SUBCASE("five targets, small spread") {
    const CrossLingualReport r = table_row({58.8, 44.3, 51.0, 51.2, 47.3});
    CHECK(round1(r.avg) == 50.5);
    REQUIRE(r.delta.has_value());
    CHECK(round1(*r.delta) == 10.4);
  }
  SUBCASE("five targets, wide spread") {
    const CrossLingualReport r = table_row({58.1, 34.5, 33.3, 50.3, 45.5});
    CHECK(round1(r.avg) == 44.3);
    CHECK(round1(*r.delta) == 17.2);
  }
  SUBCASE("source only") {
    const CrossLingualReport r = table_row({61.0});
    CHECK(r.avg == 61.0);
    CHECK(*r.delta == 0.0);
  }
  SUBCASE("no source cell") {
    const CrossLingualReport r =
        summarize_cross_lingual("en", {{"da", with_f1(40.0)}, {"es", with_f1(50.0)}});
    CHECK(r.avg == 45.0);
    CHECK_FALSE(r.delta.has_value());
  }
}

TEST_CASE("reports") {
  const CrossLingualReport r = summarize_cross_lingual("en", {{"en", prf1(5, 2, 3)}, {"da", prf1(2, 4, 6)}});
  SUBCASE("json round trip") {
    const CrossLingualReport back = report_from_json(nlohmann::json::parse(emit_report(r, "json")));
    CHECK(back.source == "en");
    REQUIRE(back.targets.size() == 2);
    CHECK(back.targets[1].first == "da");
    CHECK(back.targets[1].second.tp == 2);
    CHECK(back.targets[1].second.f1 == r.targets[1].second.f1);
    CHECK(back.avg == r.avg);
    CHECK(*back.delta == *r.delta);
    CHECK(emit_report(back, "json") == emit_report(r, "json"));
  }
  SUBCASE("markdown grid") {
    const std::string md = emit_report(r, "markdown");
    CHECK(md.find("AVG") != std::string::npos);
    CHECK(md.find("Δ") != std::string::npos);
    CHECK(md.find("en→da") != std::string::npos);
    CHECK(md.find("| 62.5 |") != std::string::npos);
  }
  SUBCASE("empty report has only the header") {
    const std::string md = emit_report(CrossLingualReport{}, "markdown");
    CHECK(std::count(md.begin(), md.end(), '\n') == 2);
  }
  SUBCASE("unknown format") {
    CHECK_THROWS_AS(emit_report(r, "csv"), UsageError);
  }
}

TEST_CASE("evaluation counts") {
  ModelConfig config;
  config.encoder.dim = 8;
  config.encoder.dim_in = 8;
  config.encoder.hash_buckets = 128;
  config.heads = 2;
  Rng rng(21);
  Corpus corpus;
  for (int d = 0; d < 12; ++d) corpus.push_back(gimc::testing::random_document(rng, 3, 5));

  SUBCASE("all-none model finds nothing") {
    ModelParams p = ModelParams::init(config, 1);
    p.classifier.setZero();  // exact ties
    long gold = 0;
    for (const Document& d : corpus) gold += static_cast<long>(d.gold_pairs.size());
    REQUIRE(gold > 0);
    const MetricsReport m = evaluate(p, corpus);
    CHECK(m.tp == 0);
    CHECK(m.fp == 0);
    CHECK(m.fn == gold);
    CHECK(m.f1 == 0.0);
  }
  SUBCASE("counts equal an independent confusion matrix") {
    const ModelParams p = ModelParams::init(config, 2);
    long tp = 0, fp = 0, fn = 0;
    for (const Document& d : corpus) {
      const DocumentBatch b = prepare_batch(d, config);
      const ForwardResult r = forward(p, b, ContrastiveConfig{});
      const std::vector<CandidatePair> pairs = candidate_pairs(d);
      for (size_t i = 0; i < pairs.size(); ++i) {
        bool gold = false;
        for (const EventPair& g : d.gold_pairs) gold = gold || g == pairs[i].pair;
        const bool pred = r.probs(static_cast<Eigen::Index>(i), 0) > 0.5;
        if (pred && gold) ++tp;
        if (pred && !gold) ++fp;
        if (!pred && gold) ++fn;
      }
    }
    const MetricsReport m = evaluate(p, corpus);
    CHECK(m.tp == tp);
    CHECK(m.fp == fp);
    CHECK(m.fn == fn);
    CHECK(tp + fp > 0);
    const MetricsReport again = evaluate(p, corpus);
    CHECK(again.f1 == m.f1);
  }
}
