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

#include "gimc/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "gimc/gatv2.h"

namespace gimc {

double GradcheckReport::max_error() const {
  double m = 0.0;
  for (const auto& [name, e] : errors) m = std::max(m, e);
  return m;
}

double gradcheck_floor(double loss) { return 1e-6 * std::max(1.0, std::abs(loss)); }

double tensor_relative_error(const Mat& analytic, const Mat& numeric, double floor) {
  if (analytic.size() == 0) return 0.0;
  const double diff = (analytic - numeric).cwiseAbs().maxCoeff();
  const double scale = std::max({analytic.cwiseAbs().maxCoeff(), numeric.cwiseAbs().maxCoeff(),
                                 floor});
  return diff / scale;
}

Mat numeric_gradient(Mat& x, const std::function<double()>& loss, double eps) {
  Mat g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = x.data()[i];
    x.data()[i] = orig + eps;
    const double up = loss();
    x.data()[i] = orig - eps;
    const double down = loss();
    x.data()[i] = orig;
    g.data()[i] = (up - down) / (2.0 * eps);
  }
  return g;
}

Mat numeric_gradient(Mat& x, const std::function<double()>& loss,
                     const std::function<std::vector<bool>()>& kinks, double eps) {
  Mat g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = x.data()[i];
    for (double step = eps;; step /= 10.0) {
      x.data()[i] = orig + step;
      const double up = loss();
      const std::vector<bool> up_signs = kinks();
      x.data()[i] = orig - step;
      const double down = loss();
      const bool crossed = kinks() != up_signs;
      x.data()[i] = orig;
      g.data()[i] = (up - down) / (2.0 * step);
      if (!crossed || step < 1e-8) break;
    }
  }
  return g;
}

std::vector<bool> leaky_signature(const Adjacency& adj, const Mat& features,
                                  const GatStack& stack) {
  std::vector<bool> signs;
  const StackTrace tr = stack_forward(adj, features, stack);
  for (const LayerTrace& layer : tr.layers) {
    for (size_t k = 0; k < layer.left.size(); ++k) {
      for (Eigen::Index i = 0; i < layer.left[k].rows(); ++i) {
        for (int j : adj[static_cast<size_t>(i)]) {
          for (Eigen::Index c = 0; c < layer.left[k].cols(); ++c) {
            signs.push_back(layer.left[k](i, c) + layer.right[k](j, c) > 0.0);
          }
        }
      }
    }
  }
  return signs;
}

GradcheckReport gradcheck_gat(uint64_t seed, int nodes, int dim, int heads, int layers) {
  if (nodes < 1) throw UsageError("gradcheck needs at least one node");
  Rng rng(seed);
  Adjacency adj(static_cast<size_t>(nodes));
  std::vector<std::vector<bool>> linked(static_cast<size_t>(nodes),
                                        std::vector<bool>(static_cast<size_t>(nodes), false));
  auto link = [&](int a, int b) {
    if (a == b || linked[static_cast<size_t>(a)][static_cast<size_t>(b)]) return;
    linked[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
    linked[static_cast<size_t>(b)][static_cast<size_t>(a)] = true;
  };
  for (int i = 1; i < nodes; ++i) link(i, static_cast<int>(uniform_index(rng, static_cast<size_t>(i))));
  for (int e = 0; e < nodes; ++e) {
    link(static_cast<int>(uniform_index(rng, static_cast<size_t>(nodes))),
         static_cast<int>(uniform_index(rng, static_cast<size_t>(nodes))));
  }
  for (int i = 0; i < nodes; ++i) {
    adj[static_cast<size_t>(i)].push_back(i);
    for (int j = 0; j < nodes; ++j) {
      if (linked[static_cast<size_t>(i)][static_cast<size_t>(j)]) adj[static_cast<size_t>(i)].push_back(j);
    }
  }

  GatStack stack = GatStack::init(dim, layers, heads, rng);
  Mat features(nodes, dim), readout(nodes, dim);
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    features.data()[i] = 2.0 * uniform_unit(rng) - 1.0;
    readout.data()[i] = 2.0 * uniform_unit(rng) - 1.0;
  }
  auto loss = [&] { return stack_forward(adj, features, stack).output.cwiseProduct(readout).sum(); };
  auto kinks = [&] { return leaky_signature(adj, features, stack); };

  GatStack grads = GatStack::zeros_like(stack);
  const StackTrace trace = stack_forward(adj, features, stack);
  const Mat grad_features = stack_backward(adj, stack, trace, readout, grads);

  const double floor = gradcheck_floor(loss());
  auto check = [&](const Mat& analytic, Mat& param) {
    return tensor_relative_error(analytic, numeric_gradient(param, loss, kinks), floor);
  };
  GradcheckReport report;
  for (size_t l = 0; l < stack.layers.size(); ++l) {
    const std::string prefix = "gat." + std::to_string(l) + ".";
    for (size_t k = 0; k < stack.layers[l].heads.size(); ++k) {
      GatHead& h = stack.layers[l].heads[k];
      const GatHead& g = grads.layers[l].heads[k];
      const std::string head = prefix + "head." + std::to_string(k) + ".";
      report.errors.emplace_back(head + "w_left", check(g.w_left, h.w_left));
      report.errors.emplace_back(head + "w_right", check(g.w_right, h.w_right));
      report.errors.emplace_back(head + "attn", check(g.attn, h.attn));
    }
    report.errors.emplace_back(prefix + "w_out",
                               check(grads.layers[l].w_out, stack.layers[l].w_out));
  }
  report.errors.emplace_back("features", check(grad_features, features));
  return report;
}

ModelConfig gradcheck_model_config() {
  ModelConfig c;
  c.encoder.dim = 8;
  c.encoder.dim_in = 8;
  c.encoder.hash_buckets = 64;
  c.layers = 3;
  c.heads = 4;
  return c;
}

GradcheckReport gradcheck_model(uint64_t seed, const ModelConfig& config) {
  // Keeps features O(1) through the stack; at training init each layer
  // shrinks them and upper-layer gradients sink below round-off.
  constexpr double kGatScale = 3.0;
  const Document doc = helicopter_fixture();
  const DictionaryList dicts = helicopter_dictionaries();
  ModelParams params = ModelParams::init(config, seed);
  // Larger embeddings than the training init keep the check away from the
  // near-zero regime where every gradient is tiny.
  std::normal_distribution<double> normal(0.0, 0.5);
  Rng rng(splitmix64(seed));
  for (Eigen::Index i = 0; i < params.encoder.embed.size(); ++i) {
    params.encoder.embed.data()[i] = normal(rng);
  }
  for (Eigen::Index i = 0; i < params.graph.role_table.size(); ++i) {
    params.graph.role_table.data()[i] = normal(rng);
  }
  for (GatLayer& layer : params.gat.layers) {
    layer.w_out *= kGatScale;
    for (GatHead& h : layer.heads) {
      h.w_left *= kGatScale;
      h.w_right *= kGatScale;
    }
  }

  DocumentBatch batch = prepare_batch(doc, config);
  ContrastiveConfig contrastive;
  Rng sample_rng = document_rng(seed, doc.id, 0);
  batch.anchors = build_anchor_sets(batch.inputs, dicts, contrastive,
                                    config.encoder.hash_buckets, sample_rng);
  if (batch.anchors.sets.empty()) throw std::logic_error("gradcheck fixture lost its anchor");

  ModelParams grads = params.zeros_like();
  forward(params, batch, contrastive, &grads);
  auto loss = [&] { return forward(params, batch, contrastive).loss.total(); };
  auto kinks = [&] {
    const EncodedDocument enc = encode(batch.inputs, params.encoder);
    return leaky_signature(batch.adjacency,
                           node_inits(batch.graph, batch.inputs, enc, params.graph), params.gat);
  };

  const double floor = gradcheck_floor(loss());
  GradcheckReport report;
  const std::vector<NamedTensor> p = params.tensors();
  const std::vector<NamedTensor> g = grads.tensors();
  for (size_t i = 0; i < p.size(); ++i) {
    report.errors.emplace_back(p[i].name,
                               tensor_relative_error(*g[i].value,
                                                     numeric_gradient(*p[i].value, loss, kinks), floor));
  }
  return report;
}

Document helicopter_fixture() {
  Document d;
  d.id = "helicopters";
  d.language = "en";
  d.sentences = {
      {{1, "two", 4, "nummod"},
       {2, "French", 4, "amod"},
       {3, "military", 4, "amod"},
       {4, "helicopters", 5, "nsubj"},
       {5, "crashed", 0, "root"},
       {6, "because", 8, "mark"},
       {7, "engines", 8, "nsubj"},
       {8, "failed", 5, "advcl"},
       {9, "yesterday", 5, "obl:tmod"},
       {10, ".", 5, "punct"}},
      {{1, "soldiers", 2, "nsubj"},
       {2, "died", 0, "root"},
       {3, "and", 5, "cc"},
       {4, "civilians", 5, "nsubj"},
       {5, "fled", 2, "conj"},
       {6, "the", 7, "det"},
       {7, "city", 5, "obj"},
       {8, ".", 2, "punct"}},
  };
  d.events = {{"e1", 0, 4, 5}, {"e2", 0, 7, 8}, {"e3", 1, 1, 2}, {"e4", 1, 4, 5}};
  d.gold_pairs = {EventPair("e1", "e2")};
  return d;
}

DictionaryList helicopter_dictionaries() {
  DictionaryList out;
  out.push_back(parse_dictionary(
      "two to\nfrench franske\nmilitary militær\nhelicopters helikoptere\n"
      "crashed styrtede\nbecause fordi\nengines motorer\nfailed svigtede\n"
      "yesterday i_går\nsoldiers soldater\ncivilians civile\nfled flygtede\n"
      "the den\nthe det\ncity by\n"));
  out.back().source_lang = "en";
  out.back().target_lang = "da";
  out.push_back(parse_dictionary(
      "two dos\nfrench franceses\nmilitary militares\nhelicopters helicópteros\n"
      "because porque\nengines motores\nfailed fallaron\nyesterday ayer\n"
      "soldiers soldados\ncivilians civiles\nfled huyeron\nthe la\ncity ciudad\n"));
  out.back().source_lang = "en";
  out.back().target_lang = "es";
  return out;
}

}  // namespace gimc
