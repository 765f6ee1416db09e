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

#include "gimc/trainer.h"

#include <algorithm>
#include <numeric>

namespace gimc {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (adamw.beta1 < 0.0 || adamw.beta1 >= 1.0 || adamw.beta2 < 0.0 || adamw.beta2 >= 1.0) {
    throw UsageError("AdamW betas must lie in [0, 1)");
  }
  if (!(adamw.eps > 0.0) || adamw.weight_decay < 0.0) {
    throw UsageError("AdamW eps must be positive and weight decay non-negative");
  }
  if (clip_norm < 0.0) throw UsageError("clip norm must be non-negative");
  contrastive.validate();
}

TrainResult train(const Corpus& corpus, const DictionaryList& dicts, const ModelConfig& model,
                  const TrainConfig& config, std::ostream* log, const EmbeddingCache* cache) {
  config.validate();
  if (corpus.empty()) throw DataError("training corpus is empty");
  const bool contrastive = config.use_contrastive && !dicts.empty() &&
                           model.encoder.mode == EncoderMode::kToy;
  if (log != nullptr && config.use_contrastive && !contrastive) {
    *log << "contrastive terms disabled: "
         << (dicts.empty() ? "no dictionaries" : "cache encoder") << "\n";
  }

  TrainResult result;
  result.params = ModelParams::init(model, config.seed);
  ModelParams grads = result.params.zeros_like();
  const std::vector<NamedTensor> param_tensors = result.params.tensors();
  const std::vector<NamedTensor> grad_tensors = grads.tensors();
  AdamW optimizer(config.adamw);

  std::vector<DocumentBatch> batches;
  for (const Document& doc : corpus) batches.push_back(prepare_batch(doc, model, cache));

  Rng shuffle_rng(splitmix64(config.seed ^ 0x5eedULL));
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const int64_t total_steps = static_cast<int64_t>(config.epochs) *
                              static_cast<int64_t>(corpus.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    for (size_t idx : order) {
      DocumentBatch& batch = batches[idx];
      batch.anchors = {};
      if (contrastive) {
        Rng rng = document_rng(config.seed, corpus[idx].id, static_cast<uint64_t>(epoch));
        batch.anchors = build_anchor_sets(batch.inputs, dicts, config.contrastive,
                                          model.encoder.hash_buckets, rng);
        stats.skipped_anchors += batch.anchors.skipped;
      }
      for (const NamedTensor& g : grad_tensors) g.value->setZero();
      const ForwardResult r = forward(result.params, batch, config.contrastive, &grads);
      if (config.clip_norm > 0.0) clip_grad_norm(grad_tensors, config.clip_norm);
      optimizer.step(param_tensors, grad_tensors,
                     lr_schedule(result.steps, total_steps, config.lr));
      ++result.steps;
      result.step_losses.push_back(r.loss.total());
      stats.mean_loss.classification += r.loss.classification;
      stats.mean_loss.statement += r.loss.statement;
      stats.mean_loss.aspect_event += r.loss.aspect_event;
      stats.mean_loss.aspect_context += r.loss.aspect_context;
    }
    const double n = static_cast<double>(corpus.size());
    stats.mean_loss.classification /= n;
    stats.mean_loss.statement /= n;
    stats.mean_loss.aspect_event /= n;
    stats.mean_loss.aspect_context /= n;
    if (config.track_train_f1) stats.train_f1 = evaluate(result.params, corpus, cache).f1;
    if (log != nullptr) {
      *log << "epoch " << stats.epoch << " loss " << stats.mean_loss.total() << " (C "
           << stats.mean_loss.classification << ", S " << stats.mean_loss.statement << ", AspE "
           << stats.mean_loss.aspect_event << ", AspC " << stats.mean_loss.aspect_context
           << ")";
      if (config.track_train_f1) *log << " train F1 " << stats.train_f1;
      *log << "\n";
    }
    result.history.push_back(stats);
  }
  return result;
}

}  // namespace gimc
