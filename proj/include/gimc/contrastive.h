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

#ifndef GIMC_CONTRASTIVE_H_
#define GIMC_CONTRASTIVE_H_

#include <array>
#include <string>
#include <vector>

#include "gimc/common.h"
#include "gimc/corpus.h"
#include "gimc/encoder.h"
#include "gimc/phrases.h"

namespace gimc {

struct ContrastiveConfig {
  int n_positives = 2;
  int k_negatives = 4;
  double temperature = 1.0;
  bool normalize = true;
  // Literal dot-product similarity inside the log-ratio; every dot product
  // must then be positive.
  bool raw_dot = false;

  void validate() const;
};

using DictionaryList = std::vector<BilingualDictionary>;

// Word-by-word translation with one dictionary; out-of-dictionary words
// are kept verbatim.
std::vector<std::string> code_switch_phrase(const std::vector<std::string>& tokens,
                                            const BilingualDictionary& dict, Rng& rng);

// Switches every phrase of a statement, drawing one dictionary per phrase.
// Phrases are visited outermost first (start ascending, end descending); a
// token already switched by an enclosing phrase keeps that translation.
std::vector<std::string> code_switch_statement(const std::vector<std::string>& tokens,
                                               const std::vector<InformativePhrase>& phrases,
                                               const DictionaryList& dicts, Rng& rng);

// A statement used as a contrastive sample, possibly code-switched.
struct SampledStatement {
  int pair_index = -1;  // candidate pair the text came from
  bool switched = false;
  std::vector<std::string> tokens;  // untagged
  std::array<Span, 2> events;
};

// Throws UsageError when `dicts` is empty.
std::vector<SampledStatement> generate_positives(const Statement& anchor, int anchor_index,
                                                 const std::vector<InformativePhrase>& phrases,
                                                 const DictionaryList& dicts,
                                                 const ContrastiveConfig& config, Rng& rng);

// Non-causal statements sharing no sentence with the anchor, drawn without
// replacement; a shortfall below K is filled with code-switched copies of
// the drawn ones (verbatim copies when no dictionary is configured). Empty
// when nothing is eligible.
std::vector<SampledStatement> select_negatives(const DocumentInputs& inputs, int anchor_index,
                                               const DictionaryList& dicts,
                                               const ContrastiveConfig& config, Rng& rng);

struct AnchorSet {
  int anchor = -1;  // candidate pair index
  std::vector<SampledStatement> positives;
  std::vector<SampledStatement> negatives;
  std::vector<StatementBags> positive_bags;
  std::vector<StatementBags> negative_bags;
};

struct AnchorSampling {
  std::vector<AnchorSet> sets;
  int skipped = 0;  // causal anchors without any eligible negative
};

// One set per gold-causal statement of the document (toy encoder only).
AnchorSampling build_anchor_sets(const DocumentInputs& inputs, const DictionaryList& dicts,
                                 const ContrastiveConfig& config, int hash_buckets, Rng& rng);

// Similarity inside the log-ratio: exp(cos(u, v) / tau) by default,
// exp(u.v / tau) without normalization, or u.v in raw-dot mode.
double sim(const Vec& u, const Vec& v, const ContrastiveConfig& config);

struct ContrastiveLoss {
  double value = 0.0;
  Vec grad_anchor;
  std::vector<Vec> grad_positives;
  std::vector<Vec> grad_negatives;
};

// -sum_j log[ s(a, p_j) / (s(a, p_j) + sum_k s(a, n_k)) ] with exact
// gradients for every input vector. Shared by the statement-level loss and
// both aspect-level losses; only the sample vectors differ.
ContrastiveLoss contrastive_loss(const Vec& anchor, const std::vector<Vec>& positives,
                                 const std::vector<Vec>& negatives,
                                 const ContrastiveConfig& config);

}  // namespace gimc

#endif  // GIMC_CONTRASTIVE_H_
