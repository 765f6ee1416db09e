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

#include "gimc/graph.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "gimc/phrases.h"

namespace gimc {

namespace {

void add_edge(std::vector<std::pair<int, int>>& set, int a, int b) {
  if (a == b) return;
  set.emplace_back(std::min(a, b), std::max(a, b));
}

bool phrase_holds_event(const InformativePhrase& ph, const EventMention& e) {
  return ph.sentence_index == e.sentence_index && ph.start < e.end && e.start < ph.end;
}

}  // namespace

std::vector<std::vector<int>> HeteroGraph::adjacency() const {
  std::vector<std::set<int>> sets(nodes.size());
  for (const auto& kind : edges) {
    for (const auto& [a, b] : kind) {
      sets[static_cast<size_t>(a)].insert(b);
      sets[static_cast<size_t>(b)].insert(a);
    }
  }
  std::vector<std::vector<int>> adj(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    adj[i].push_back(static_cast<int>(i));
    adj[i].insert(adj[i].end(), sets[i].begin(), sets[i].end());
  }
  return adj;
}

HeteroGraph build_topology(const DocumentInputs& inputs) {
  const Document& doc = *inputs.doc;
  HeteroGraph g;
  g.num_sentences = static_cast<int>(doc.sentences.size());
  g.num_pairs = static_cast<int>(inputs.pairs.size());

  std::vector<int> first_ordinal;  // per sentence
  for (int s = 0; s < g.num_sentences; ++s) {
    first_ordinal.push_back(static_cast<int>(g.phrases.size()));
    for (size_t i = 0; i < inputs.phrases[static_cast<size_t>(s)].size(); ++i) {
      g.phrases.push_back({s, static_cast<int>(i)});
    }
  }
  for (size_t o = 0; o < g.phrases.size(); ++o) {
    g.nodes.push_back({NodeKind::kPhrase, static_cast<int>(o)});
  }
  for (int s = 0; s < g.num_sentences; ++s) g.nodes.push_back({NodeKind::kSentence, s});
  for (int p = 0; p < g.num_pairs; ++p) g.nodes.push_back({NodeKind::kStatement, p});
  for (int p = 0; p < g.num_pairs; ++p) g.nodes.push_back({NodeKind::kEventPair, p});

  auto& pp = g.edges[static_cast<size_t>(EdgeKind::kPP)];
  auto& sp = g.edges[static_cast<size_t>(EdgeKind::kSP)];
  auto& pe = g.edges[static_cast<size_t>(EdgeKind::kPE)];
  auto& se = g.edges[static_cast<size_t>(EdgeKind::kSE)];
  auto& ste = g.edges[static_cast<size_t>(EdgeKind::kStE)];
  auto& ee = g.edges[static_cast<size_t>(EdgeKind::kEE)];

  for (int s = 0; s < g.num_sentences; ++s) {
    const auto& phrases = inputs.phrases[static_cast<size_t>(s)];
    const int base = first_ordinal[static_cast<size_t>(s)];
    for (const auto& [a, b] : phrase_edges(phrases, doc.sentences[static_cast<size_t>(s)])) {
      add_edge(pp, g.phrase_node(base + a), g.phrase_node(base + b));
    }
    for (size_t i = 0; i < phrases.size(); ++i) {
      add_edge(sp, g.phrase_node(base + static_cast<int>(i)), g.sentence_node(s));
    }
  }

  for (int p = 0; p < g.num_pairs; ++p) {
    const EventPair& pair = inputs.pairs[static_cast<size_t>(p)].pair;
    const EventMention& a = doc.event(pair.first);
    const EventMention& b = doc.event(pair.second);
    const int node = g.pair_node(p);
    for (size_t o = 0; o < g.phrases.size(); ++o) {
      const InformativePhrase& ph = inputs.phrase(g.phrases[o].sentence, g.phrases[o].index);
      if (phrase_holds_event(ph, a) || phrase_holds_event(ph, b)) {
        add_edge(pe, g.phrase_node(static_cast<int>(o)), node);
      }
    }
    add_edge(se, g.sentence_node(a.sentence_index), node);
    if (b.sentence_index != a.sentence_index) add_edge(se, g.sentence_node(b.sentence_index), node);
    add_edge(ste, g.statement_node(p), node);
    for (int q = p + 1; q < g.num_pairs; ++q) {
      const EventPair& other = inputs.pairs[static_cast<size_t>(q)].pair;
      if (pair.first == other.first || pair.first == other.second ||
          pair.second == other.first || pair.second == other.second) {
        add_edge(ee, node, g.pair_node(q));
      }
    }
  }
  for (auto& set : g.edges) std::sort(set.begin(), set.end());
  return g;
}

GraphParams GraphParams::init(int dim, Rng& rng) {
  GraphParams p;
  std::normal_distribution<double> normal(0.0, 0.02);
  p.role_table.resize(static_cast<Eigen::Index>(kRetainedRelations.size()), dim);
  for (Eigen::Index i = 0; i < p.role_table.size(); ++i) p.role_table.data()[i] = normal(rng);
  const double bound = 1.0 / std::sqrt(2.0 * dim);
  p.pair_proj.resize(dim, 2 * dim);
  for (Eigen::Index i = 0; i < p.pair_proj.size(); ++i) {
    p.pair_proj.data()[i] = (2.0 * uniform_unit(rng) - 1.0) * bound;
  }
  return p;
}

GraphParams GraphParams::zeros_like(const GraphParams& other) {
  return {Mat::Zero(other.role_table.rows(), other.role_table.cols()),
          Mat::Zero(other.pair_proj.rows(), other.pair_proj.cols())};
}

namespace {

Vec pair_input(const DocumentInputs& inputs, const EncodedDocument& encoded, int p) {
  const EventPair& pair = inputs.pairs[static_cast<size_t>(p)].pair;
  const Document& doc = *inputs.doc;
  const Vec& ei = encoded.event_vectors[static_cast<size_t>(doc.event_index(pair.first))];
  const Vec& ej = encoded.event_vectors[static_cast<size_t>(doc.event_index(pair.second))];
  Vec cat(ei.size() + ej.size());
  cat << ei, ej;
  return cat;
}

}  // namespace

Mat node_inits(const HeteroGraph& graph, const DocumentInputs& inputs,
               const EncodedDocument& encoded, const GraphParams& params) {
  const Eigen::Index dim = params.pair_proj.rows();
  if (params.role_table.cols() != dim || params.pair_proj.cols() != 2 * dim) {
    throw DataError("graph parameter shapes do not match model width");
  }
  for (const Vec& v : encoded.sentence_vectors) {
    if (v.size() != dim) throw DataError("encoded width does not match graph width");
  }
  Mat h(graph.num_nodes(), dim);
  for (int n = 0; n < graph.num_nodes(); ++n) {
    const GraphNode& node = graph.nodes[static_cast<size_t>(n)];
    const auto src = static_cast<size_t>(node.source);
    switch (node.kind) {
      case NodeKind::kPhrase: {
        const PhraseRef ref = graph.phrases[src];
        const InformativePhrase& ph = inputs.phrase(ref.sentence, ref.index);
        const std::vector<Vec>& toks = encoded.token_vectors[static_cast<size_t>(ref.sentence)];
        Vec mean = Vec::Zero(dim);
        for (int i = ph.start; i < ph.end; ++i) mean += toks[static_cast<size_t>(i)];
        mean /= static_cast<double>(ph.end - ph.start);
        h.row(n) = (mean + params.role_table.row(relation_id(ph.role)).transpose()).transpose();
        break;
      }
      case NodeKind::kSentence:
        h.row(n) = encoded.sentence_vectors[src].transpose();
        break;
      case NodeKind::kStatement:
        h.row(n) = encoded.statement_vectors[src].transpose();
        break;
      case NodeKind::kEventPair:
        h.row(n) = (params.pair_proj * pair_input(inputs, encoded, node.source)).transpose();
        break;
    }
  }
  return h;
}

void node_inits_backward(const HeteroGraph& graph, const DocumentInputs& inputs,
                         const EncodedDocument& encoded, const Mat& grad_inits,
                         const EncoderParams& enc, const GraphParams& params,
                         EncoderParams& enc_grads, GraphParams& grads) {
  const Document& doc = *inputs.doc;
  const Eigen::Index dim = params.pair_proj.rows();
  for (int n = 0; n < graph.num_nodes(); ++n) {
    const GraphNode& node = graph.nodes[static_cast<size_t>(n)];
    const auto src = static_cast<size_t>(node.source);
    const Vec g = grad_inits.row(n).transpose();
    switch (node.kind) {
      case NodeKind::kPhrase: {
        const PhraseRef ref = graph.phrases[src];
        const InformativePhrase& ph = inputs.phrase(ref.sentence, ref.index);
        project_backward(inputs.span_bag(ref.sentence, ph.start, ph.end), g, inputs, enc,
                         enc_grads);
        grads.role_table.row(relation_id(ph.role)) += g.transpose();
        break;
      }
      case NodeKind::kSentence:
        project_backward(inputs.sentence_bags[src], g, inputs, enc, enc_grads);
        break;
      case NodeKind::kStatement:
        project_backward(inputs.statement_bags[src].cls, g, inputs, enc, enc_grads);
        break;
      case NodeKind::kEventPair: {
        grads.pair_proj.noalias() +=
            g * pair_input(inputs, encoded, node.source).transpose();
        const Vec back = params.pair_proj.transpose() * g;
        const EventPair& pair = inputs.pairs[src].pair;
        project_backward(inputs.event_bags[static_cast<size_t>(doc.event_index(pair.first))],
                         back.head(dim), inputs, enc, enc_grads);
        project_backward(inputs.event_bags[static_cast<size_t>(doc.event_index(pair.second))],
                         back.tail(dim), inputs, enc, enc_grads);
        break;
      }
    }
  }
}

nlohmann::json GraphStats::to_json() const {
  nlohmann::json j;
  for (size_t k = 0; k < nodes.size(); ++k) j["nodes"][std::string(kNodeKindNames[k])] = nodes[k];
  for (size_t k = 0; k < edges.size(); ++k) j["edges"][std::string(kEdgeKindNames[k])] = edges[k];
  return j;
}

GraphStats graph_stats(const HeteroGraph& graph) {
  GraphStats st;
  for (const GraphNode& n : graph.nodes) ++st.nodes[static_cast<size_t>(n.kind)];
  for (size_t k = 0; k < graph.edges.size(); ++k) {
    st.edges[k] = static_cast<int>(graph.edges[k].size());
  }
  return st;
}

}  // namespace gimc
