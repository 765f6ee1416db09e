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

#ifndef GIMC_GRAPH_H_
#define GIMC_GRAPH_H_

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "gimc/common.h"
#include "gimc/encoder.h"
#include "json.hpp"

namespace gimc {

enum class NodeKind { kPhrase, kSentence, kStatement, kEventPair };
enum class EdgeKind { kPP, kSP, kPE, kSE, kStE, kEE };

inline constexpr std::array<std::string_view, 4> kNodeKindNames = {
    "phrase", "sentence", "statement", "event_pair"};
inline constexpr std::array<std::string_view, 6> kEdgeKindNames = {
    "PP", "SP", "PE", "SE", "StE", "EE"};

struct GraphNode {
  NodeKind kind;
  int source;  // phrase ordinal, sentence index, or candidate-pair index
};

struct PhraseRef {
  int sentence;
  int index;  // into DocumentInputs::phrases[sentence]
};

// Nodes are laid out phrases, sentences, statements, event pairs; each
// candidate pair owns one statement node and one event-pair node.
struct HeteroGraph {
  std::vector<GraphNode> nodes;
  std::array<std::vector<std::pair<int, int>>, 6> edges;  // a < b
  std::vector<PhraseRef> phrases;
  int num_sentences = 0;
  int num_pairs = 0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int phrase_node(int ordinal) const { return ordinal; }
  int sentence_node(int s) const { return static_cast<int>(phrases.size()) + s; }
  int statement_node(int p) const { return sentence_node(num_sentences) + p; }
  int pair_node(int p) const { return statement_node(num_pairs) + p; }

  const std::vector<std::pair<int, int>>& edges_of(EdgeKind k) const {
    return edges[static_cast<size_t>(k)];
  }
  // Undirected neighbor lists with a self-loop first, then ascending.
  std::vector<std::vector<int>> adjacency() const;
};

// Parameter-free topology: all six edge sets for the document.
HeteroGraph build_topology(const DocumentInputs& inputs);

struct GraphParams {
  Mat role_table;  // 19 x dim, row per retained relation
  Mat pair_proj;   // dim x 2*dim, maps [e_i || e_j] to the pair init

  static GraphParams init(int dim, Rng& rng);
  static GraphParams zeros_like(const GraphParams& other);
};

// Initial node features (num_nodes x dim).
Mat node_inits(const HeteroGraph& graph, const DocumentInputs& inputs,
               const EncodedDocument& encoded, const GraphParams& params);

// Backpropagates dL/dH0 into the graph and encoder parameters.
void node_inits_backward(const HeteroGraph& graph, const DocumentInputs& inputs,
                         const EncodedDocument& encoded, const Mat& grad_inits,
                         const EncoderParams& enc, const GraphParams& params,
                         EncoderParams& enc_grads, GraphParams& grads);

struct GraphStats {
  std::array<int, 4> nodes{};
  std::array<int, 6> edges{};

  nlohmann::json to_json() const;
};

GraphStats graph_stats(const HeteroGraph& graph);

}  // namespace gimc

#endif  // GIMC_GRAPH_H_
