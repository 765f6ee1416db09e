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
#include "gimc/checkpoint.h"
#include "gimc/synthetic.h"
#include "gimc/trainer.h"

using namespace gimc;

namespace {

ModelConfig small_model() {
  ModelConfig m;
  m.encoder.dim = 16;
  m.encoder.dim_in = 16;
  m.encoder.hash_buckets = 512;
  return m;
}

SyntheticCorpus corpus(int docs, std::vector<std::string> langs = {"en"}) {
  SyntheticSpec spec;
  spec.languages = std::move(langs);
  spec.docs_per_language = docs;
  return generate_synthetic(spec);
}

}  // namespace

TEST_CASE("one document, one epoch, one step") {
  TrainConfig config;
  config.epochs = 1;
  const TrainResult r = train(corpus(1).corpora.at("en"), {}, small_model(), config);
  CHECK(r.steps == 1);
  CHECK(r.step_losses.size() == 1);
  CHECK(r.history.size() == 1);
  CHECK(std::isfinite(r.step_losses[0]));
}

TEST_CASE("steps, finiteness and contrastive bookkeeping") {
  const SyntheticCorpus c = corpus(4, {"en", "da"});
  TrainConfig config;
  config.epochs = 3;
  const TrainResult r = train(c.corpora.at("en"), c.dictionaries, small_model(), config);
  CHECK(r.steps == 12);
  for (double l : r.step_losses) CHECK(std::isfinite(l));
  for (const EpochStats& e : r.history) {
    CHECK(e.mean_loss.statement > 0.0);
    CHECK(e.mean_loss.aspect_event > 0.0);
    CHECK(e.mean_loss.aspect_context > 0.0);
    CHECK(e.train_f1 >= 0.0);
    CHECK(e.train_f1 <= 100.0);
  }

  config.use_contrastive = false;
  const TrainResult off = train(c.corpora.at("en"), c.dictionaries, small_model(), config);
  for (const EpochStats& e : off.history) CHECK(e.mean_loss.statement == 0.0);
}

TEST_CASE("training replays bit-identically") {
  const SyntheticCorpus c = corpus(3, {"en", "da"});
  TrainConfig config;
  config.epochs = 4;
  TrainResult a = train(c.corpora.at("en"), c.dictionaries, small_model(), config);
  TrainResult b = train(c.corpora.at("en"), c.dictionaries, small_model(), config);
  CHECK(a.step_losses == b.step_losses);
  CHECK(serialize_checkpoint(a.params) == serialize_checkpoint(b.params));
  config.seed = 14;
  TrainResult d = train(c.corpora.at("en"), c.dictionaries, small_model(), config);
  CHECK(serialize_checkpoint(d.params) != serialize_checkpoint(a.params));
}

TEST_CASE("epoch loss falls over the first ten epochs") {
  TrainConfig config;
  config.epochs = 60;
  const TrainResult r = train(corpus(8).corpora.at("en"), {}, small_model(), config);
  int rises = 0;
  for (size_t e = 1; e < 10; ++e) {
    rises += r.history[e].mean_loss.total() > r.history[e - 1].mean_loss.total();
  }
  CHECK(rises <= 2);
  CHECK(r.history[9].mean_loss.total() < r.history[0].mean_loss.total());
}

TEST_CASE("config validation") {
  TrainConfig config;
  config.epochs = 0;
  CHECK_THROWS_AS(train(corpus(1).corpora.at("en"), {}, small_model(), config), UsageError);
  config.epochs = 1;
  config.lr = -1.0;
  CHECK_THROWS_AS(train(corpus(1).corpora.at("en"), {}, small_model(), config), UsageError);
}
