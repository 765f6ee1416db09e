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

#include "gimc/model.h"

#include <algorithm>
#include <cmath>

#include "gimc/embedding_cache.h"

namespace gimc {

void ModelConfig::validate() const {
  encoder.validate();
  if (layers < 1) throw UsageError("need at least one attention layer");
  if (heads < 1 || encoder.dim % heads != 0) {
    throw UsageError("dim " + std::to_string(encoder.dim) + " must be divisible by heads " +
                     std::to_string(heads));
  }
}

ModelParams ModelParams::init(const ModelConfig& config, uint64_t seed) {
  config.validate();
  Rng rng(seed);
  ModelParams p;
  p.config = config;
  p.encoder = EncoderParams::init(config.encoder, rng);
  p.graph = GraphParams::init(config.encoder.dim, rng);
  p.gat = GatStack::init(config.encoder.dim, config.layers, config.heads, rng);
  for (GatLayer& l : p.gat.layers) l.leaky_slope = config.leaky_slope;
  const int dim = config.encoder.dim;
  const double bound = 1.0 / std::sqrt(2.0 * dim);
  p.classifier.resize(2, 2 * dim);
  for (Eigen::Index i = 0; i < p.classifier.size(); ++i) {
    p.classifier.data()[i] = (2.0 * uniform_unit(rng) - 1.0) * bound;
  }
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.config = config;
  z.encoder = EncoderParams::zeros_like(encoder);
  z.graph = GraphParams::zeros_like(graph);
  z.gat = GatStack::zeros_like(gat);
  z.classifier = Mat::Zero(classifier.rows(), classifier.cols());
  return z;
}

std::vector<NamedTensor> ModelParams::tensors() {
  std::vector<NamedTensor> out;
  if (encoder.embed.size() > 0) out.push_back({"encoder.embed", &encoder.embed});
  out.push_back({"encoder.projection", &encoder.projection});
  out.push_back({"graph.role_table", &graph.role_table});
  out.push_back({"graph.pair_proj", &graph.pair_proj});
  for (size_t l = 0; l < gat.layers.size(); ++l) {
    const std::string prefix = "gat." + std::to_string(l) + ".";
    for (size_t k = 0; k < gat.layers[l].heads.size(); ++k) {
      const std::string head = prefix + "head." + std::to_string(k) + ".";
      GatHead& h = gat.layers[l].heads[k];
      out.push_back({head + "w_left", &h.w_left});
      out.push_back({head + "w_right", &h.w_right});
      out.push_back({head + "attn", &h.attn});
    }
    out.push_back({prefix + "w_out", &gat.layers[l].w_out});
  }
  out.push_back({"classifier.weight", &classifier});
  return out;
}

size_t ModelParams::num_scalars() {
  size_t n = 0;
  for (const NamedTensor& t : tensors()) n += static_cast<size_t>(t.value->size());
  return n;
}

DocumentBatch prepare_batch(const Document& doc, const ModelConfig& config,
                            const EmbeddingCache* cache) {
  DocumentBatch b;
  b.inputs = prepare_inputs(doc, config.encoder, cache);
  b.graph = build_topology(b.inputs);
  b.adjacency = b.graph.adjacency();
  return b;
}

Rng document_rng(uint64_t seed, const std::string& doc_id, uint64_t epoch) {
  return Rng(splitmix64(seed ^ fnv1a(doc_id) ^ splitmix64(epoch)));
}

std::array<double, 2> predict_pair(const Vec& v_pair, const Vec& h_stmt, const Mat& classifier) {
  Vec input(v_pair.size() + h_stmt.size());
  input << v_pair, h_stmt;
  const Vec logits = classifier * input;
  const double top = logits.maxCoeff();
  const double a = std::exp(logits(0) - top);
  const double b = std::exp(logits(1) - top);
  return {a / (a + b), b / (a + b)};
}

ClassificationLoss classification_loss(const Mat& logits, const std::vector<bool>& causal) {
  constexpr double kLogFloor = 1e-12;
  ClassificationLoss out;
  out.probs = Mat::Zero(logits.rows(), 2);
  out.grad_logits = Mat::Zero(logits.rows(), 2);
  for (Eigen::Index p = 0; p < logits.rows(); ++p) {
    const double top = logits.row(p).maxCoeff();
    const double a = std::exp(logits(p, 0) - top);
    const double b = std::exp(logits(p, 1) - top);
    out.probs(p, 0) = a / (a + b);
    out.probs(p, 1) = b / (a + b);
    const int gold = causal[static_cast<size_t>(p)] ? 0 : 1;
    const double pg = out.probs(p, gold);
    out.value -= std::log(std::max(pg, kLogFloor));
    if (pg > kLogFloor) {
      out.grad_logits.row(p) = out.probs.row(p);
      out.grad_logits(p, gold) -= 1.0;
    }
  }
  return out;
}

namespace {

void contrastive_terms(const ModelParams& params, const DocumentBatch& batch,
                       const ContrastiveConfig& config, LossBreakdown& loss,
                       ModelParams* grads) {
  const DocumentInputs& in = batch.inputs;
  for (const AnchorSet& set : batch.anchors.sets) {
    const Bag& anchor_bag = in.statement_bags[static_cast<size_t>(set.anchor)].cls;
    const Vec anchor = project(anchor_bag, in, params.encoder);
    Vec grad_anchor = Vec::Zero(anchor.size());

    using View = Bag StatementBags::*;
    const std::array<std::pair<View, double*>, 3> views = {
        std::pair<View, double*>{&StatementBags::cls, &loss.statement},
        {&StatementBags::aspect_event, &loss.aspect_event},
        {&StatementBags::aspect_context, &loss.aspect_context}};
    for (const auto& [view, slot] : views) {
      std::vector<Vec> pos, neg;
      for (const auto& b : set.positive_bags) pos.push_back(project(b.*view, in, params.encoder));
      for (const auto& b : set.negative_bags) neg.push_back(project(b.*view, in, params.encoder));
      const ContrastiveLoss l = contrastive_loss(anchor, pos, neg, config);
      *slot += l.value;
      if (grads == nullptr) continue;
      grad_anchor += l.grad_anchor;
      for (size_t j = 0; j < pos.size(); ++j) {
        project_backward(set.positive_bags[j].*view, l.grad_positives[j], in, params.encoder,
                         grads->encoder);
      }
      for (size_t k = 0; k < neg.size(); ++k) {
        project_backward(set.negative_bags[k].*view, l.grad_negatives[k], in, params.encoder,
                         grads->encoder);
      }
    }
    if (grads != nullptr) {
      project_backward(anchor_bag, grad_anchor, in, params.encoder, grads->encoder);
    }
  }
}

}  // namespace

ForwardResult forward(const ModelParams& params, const DocumentBatch& batch,
                      const ContrastiveConfig& contrastive, ModelParams* grads) {
  const DocumentInputs& in = batch.inputs;
  const HeteroGraph& g = batch.graph;
  const Eigen::Index dim = params.classifier.cols() / 2;
  ForwardResult out;

  const EncodedDocument enc = encode(in, params.encoder);
  const Mat h0 = node_inits(g, in, enc, params.graph);
  const StackTrace trace = stack_forward(batch.adjacency, h0, params.gat);
  const Mat& hl = trace.output;

  const auto num_pairs = static_cast<Eigen::Index>(in.pairs.size());
  Mat inputs(num_pairs, 2 * dim);
  std::vector<bool> labels;
  for (Eigen::Index p = 0; p < num_pairs; ++p) {
    const int pi = static_cast<int>(p);
    inputs.row(p).head(dim) = hl.row(g.pair_node(pi));
    if (params.config.pregraph_statement) {
      inputs.row(p).tail(dim) = enc.statement_vectors[static_cast<size_t>(p)].transpose();
    } else {
      inputs.row(p).tail(dim) = hl.row(g.statement_node(pi));
    }
    labels.push_back(in.pairs[static_cast<size_t>(p)].causal);
  }
  const Mat logits = inputs * params.classifier.transpose();
  ClassificationLoss cls = classification_loss(logits, labels);
  out.loss.classification = cls.value;
  out.probs = cls.probs;

  if (grads != nullptr && num_pairs > 0) {
    grads->classifier.noalias() += cls.grad_logits.transpose() * inputs;
    const Mat grad_inputs = cls.grad_logits * params.classifier;
    Mat grad_hl = Mat::Zero(hl.rows(), hl.cols());
    for (Eigen::Index p = 0; p < num_pairs; ++p) {
      const int pi = static_cast<int>(p);
      grad_hl.row(g.pair_node(pi)) += grad_inputs.row(p).head(dim);
      if (params.config.pregraph_statement) {
        project_backward(in.statement_bags[static_cast<size_t>(p)].cls,
                         grad_inputs.row(p).tail(dim).transpose(), in, params.encoder,
                         grads->encoder);
      } else {
        grad_hl.row(g.statement_node(pi)) += grad_inputs.row(p).tail(dim);
      }
    }
    const Mat grad_h0 = stack_backward(batch.adjacency, params.gat, trace, grad_hl, grads->gat);
    node_inits_backward(g, in, enc, grad_h0, params.encoder, params.graph, grads->encoder,
                        grads->graph);
  }

  contrastive_terms(params, batch, contrastive, out.loss, grads);
  return out;
}

}  // namespace gimc
