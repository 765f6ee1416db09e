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

#ifndef GIMC_MODEL_H_
#define GIMC_MODEL_H_

#include <array>
#include <string>
#include <vector>

#include "gimc/common.h"
#include "gimc/contrastive.h"
#include "gimc/encoder.h"
#include "gimc/gatv2.h"
#include "gimc/graph.h"

namespace gimc {

class EmbeddingCache;

struct ModelConfig {
  EncoderConfig encoder;
  int layers = 3;
  int heads = 4;
  double leaky_slope = 0.2;
  // Classifier reads the encoder statement vector instead of the
  // post-graph statement node.
  bool pregraph_statement = false;

  void validate() const;
};

struct NamedTensor {
  std::string name;
  Mat* value;
};

struct ModelParams {
  ModelConfig config;
  EncoderParams encoder;
  GraphParams graph;
  GatStack gat;
  Mat classifier;  // 2 x 2*dim; row 0 = causal, row 1 = none

  // Weight matrices uniform(+-1/sqrt(fan_in)); embedding and role tables
  // normal(0, 0.02).
  static ModelParams init(const ModelConfig& config, uint64_t seed);
  ModelParams zeros_like() const;

  // Every trainable tensor in a fixed order.
  std::vector<NamedTensor> tensors();
  size_t num_scalars();
};

// Parameter-free per-document state: inputs, graph topology and (when
// sampled) the contrastive anchor sets.
struct DocumentBatch {
  DocumentInputs inputs;
  HeteroGraph graph;
  Adjacency adjacency;
  AnchorSampling anchors;
};

// `doc` must outlive the batch.
DocumentBatch prepare_batch(const Document& doc, const ModelConfig& config,
                            const EmbeddingCache* cache = nullptr);

// Per-document sampling stream, derived from the run seed, the document id
// and the epoch.
Rng document_rng(uint64_t seed, const std::string& doc_id, uint64_t epoch);

struct LossBreakdown {
  double classification = 0.0;
  double statement = 0.0;
  double aspect_event = 0.0;
  double aspect_context = 0.0;

  double total() const { return classification + statement + aspect_event + aspect_context; }
};

// softmax(W_p [v_pair || h_stmt]) as (causal, none).
std::array<double, 2> predict_pair(const Vec& v_pair, const Vec& h_stmt, const Mat& classifier);

struct ClassificationLoss {
  double value = 0.0;
  Mat probs;        // pairs x 2
  Mat grad_logits;  // pairs x 2
};

// Cross entropy summed over pairs; log clamped at 1e-12.
ClassificationLoss classification_loss(const Mat& logits, const std::vector<bool>& causal);

struct ForwardResult {
  LossBreakdown loss;
  Mat probs;  // pairs x 2
};

// Full objective L_C + L_S + L_AspE + L_AspC for one document. Gradients
// are accumulated into `grads` when non-null. Contrastive terms are
// computed for whatever anchor sets the batch holds.
ForwardResult forward(const ModelParams& params, const DocumentBatch& batch,
                      const ContrastiveConfig& contrastive, ModelParams* grads = nullptr);

}  // namespace gimc

#endif  // GIMC_MODEL_H_
