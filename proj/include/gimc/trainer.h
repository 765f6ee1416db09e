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

#ifndef GIMC_TRAINER_H_
#define GIMC_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "gimc/contrastive.h"
#include "gimc/corpus.h"
#include "gimc/metrics.h"
#include "gimc/model.h"
#include "gimc/optim.h"

namespace gimc {

struct TrainConfig {
  double lr = 1e-3;
  int epochs = 60;
  uint64_t seed = 13;
  AdamWConfig adamw;
  ContrastiveConfig contrastive;
  // Contrastive terms also need at least one dictionary.
  bool use_contrastive = true;
  double clip_norm = 0.0;  // 0 disables clipping
  bool track_train_f1 = true;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  LossBreakdown mean_loss;  // averaged over documents
  double train_f1 = 0.0;
  int skipped_anchors = 0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;
  std::vector<double> step_losses;
  int64_t steps = 0;
};

// One optimizer step per document (batch size 1), documents shuffled each
// epoch, learning rate decayed linearly to zero over epochs x |corpus|
// steps. Progress lines go to `log` when non-null.
TrainResult train(const Corpus& corpus, const DictionaryList& dicts, const ModelConfig& model,
                  const TrainConfig& config, std::ostream* log = nullptr,
                  const EmbeddingCache* cache = nullptr);

}  // namespace gimc

#endif  // GIMC_TRAINER_H_
