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

#include "gimc/phrases.h"

#include <algorithm>

namespace gimc {

bool is_retained(std::string_view deprel) { return relation_id(deprel) >= 0; }

int relation_id(std::string_view deprel) {
  for (size_t i = 0; i < kRetainedRelations.size(); ++i) {
    if (kRetainedRelations[i] == deprel) return static_cast<int>(i);
  }
  return -1;
}

std::vector<InformativePhrase> extract_phrases(const Sentence& sentence,
                                               int sentence_index) {
  const int n = static_cast<int>(sentence.size());
  std::vector<std::vector<int>> children(static_cast<size_t>(n) + 1);
  for (const Token& t : sentence) children[static_cast<size_t>(t.head)].push_back(t.index);

  std::vector<InformativePhrase> phrases;
  std::vector<int> stack;
  for (const Token& t : sentence) {
    if (t.head == 0 || t.deprel == "root" || !is_retained(t.deprel)) continue;
    int lo = t.index, hi = t.index;
    stack.assign(1, t.index);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      lo = std::min(lo, cur);
      hi = std::max(hi, cur);
      for (int c : children[static_cast<size_t>(cur)]) stack.push_back(c);
    }
    phrases.push_back({sentence_index, lo - 1, hi, t.deprel, t.index});
  }
  std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.end, a.role, a.root_token) <
           std::tie(b.start, b.end, b.role, b.root_token);
  });
  phrases.erase(std::unique(phrases.begin(), phrases.end(),
                            [](const auto& a, const auto& b) {
                              return a.start == b.start && a.end == b.end &&
                                     a.role == b.role;
                            }),
                phrases.end());
  return phrases;
}

std::vector<std::pair<int, int>> phrase_edges(
    const std::vector<InformativePhrase>& phrases, const Sentence& sentence) {
  auto head_inside = [&](const InformativePhrase& child, const InformativePhrase& parent) {
    const int head = sentence[static_cast<size_t>(child.root_token - 1)].head;
    return head > 0 && parent.contains(head - 1);
  };
  std::vector<std::pair<int, int>> edges;
  for (size_t a = 0; a < phrases.size(); ++a) {
    for (size_t b = a + 1; b < phrases.size(); ++b) {
      if (head_inside(phrases[b], phrases[a]) || head_inside(phrases[a], phrases[b])) {
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  return edges;
}

std::string phrase_text(const InformativePhrase& phrase, const Sentence& sentence) {
  std::string out;
  for (int i = phrase.start; i < phrase.end; ++i) {
    if (!out.empty()) out += ' ';
    out += sentence[static_cast<size_t>(i)].form;
  }
  return out;
}

}  // namespace gimc
