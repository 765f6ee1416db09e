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

#ifndef GIMC_PHRASES_H_
#define GIMC_PHRASES_H_

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gimc/corpus.h"

namespace gimc {

// Dependency relations whose dependents head informative phrases. Exact
// label match only: "obl:agent" is not retained even though "obl" is.
inline constexpr std::array<std::string_view, 19> kRetainedRelations = {
    "nsubj", "nsubj:pass", "obj",        "iobj",   "csubj",
    "obl",   "obl:loc",    "obl:tmod",   "obl:npmod", "dislocated",
    "advcl", "advmod",     "appos",      "acl",    "acl:relcl",
    "conj",  "list",       "parataxis",  "root"};

bool is_retained(std::string_view deprel);

// Row of `deprel` in kRetainedRelations, or -1.
int relation_id(std::string_view deprel);

struct InformativePhrase {
  int sentence_index = 0;
  int start = 0;  // half-open, 0-based token positions
  int end = 0;
  std::string role;
  int root_token = 0;  // 1-based token index

  bool contains(int position) const { return start <= position && position < end; }
  auto operator<=>(const InformativePhrase&) const = default;
};

// One phrase per token carrying a retained (non-root) relation; its span is
// the min/max projection of the token's subtree. Sorted by start, then end,
// then role; identical span+role duplicates are dropped.
std::vector<InformativePhrase> extract_phrases(const Sentence& sentence,
                                               int sentence_index = 0);

// Unordered index pairs (a < b) into `phrases`: linked when the head of one
// phrase's root token lies inside the other phrase's span.
std::vector<std::pair<int, int>> phrase_edges(
    const std::vector<InformativePhrase>& phrases, const Sentence& sentence);

// Surface text of a phrase, space-joined.
std::string phrase_text(const InformativePhrase& phrase, const Sentence& sentence);

}  // namespace gimc

#endif  // GIMC_PHRASES_H_
