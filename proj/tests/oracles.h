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


#ifndef GIMC_TESTS_ORACLES_H_
#define GIMC_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fixtures.h"
#include "gimc/corpus.h"
#include "gimc/phrases.h"

namespace gimc::testing {

// Phrases re-derived from scratch: one per retained non-root dependent,
// spanning the min/max of its subtree.
inline std::set<std::tuple<int, int, std::string>> brute_force_phrases(const Sentence& s) {
  std::set<std::tuple<int, int, std::string>> out;
  for (const Token& t : s) {
    if (t.deprel == "root" || !is_retained(t.deprel)) continue;
    const std::set<int> sub = subtree(s, t.index);
    out.emplace(*sub.begin() - 1, *sub.rbegin(), t.deprel);
  }
  return out;
}

using EdgeSet = std::set<std::pair<int, int>>;

inline EdgeSet as_set(const std::vector<std::pair<int, int>>& edges) {
  return EdgeSet(edges.begin(), edges.end());
}

inline void link(EdgeSet& set, int a, int b) { set.emplace(std::min(a, b), std::max(a, b)); }

struct Expected {
  std::array<EdgeSet, 6> edges;
  int nodes = 0;
};

// Re-derives every edge set from the document alone: phrases from subtree
// walks, pair membership from event ids, sentence membership from mentions.
inline Expected brute_force_graph(const Document& d) {
  struct P {
    int sentence, start, end;
    std::string role;
    int root;
  };
  std::vector<P> phrases;
  for (size_t s = 0; s < d.sentences.size(); ++s) {
    std::set<std::tuple<int, int, std::string, int>> found;
    for (const Token& t : d.sentences[s]) {
      if (t.deprel == "root" || !is_retained(t.deprel)) continue;
      const std::set<int> sub = subtree(d.sentences[s], t.index);
      found.emplace(*sub.begin() - 1, *sub.rbegin(), t.deprel, t.index);
    }
    std::set<std::tuple<int, int, std::string>> seen;
    for (const auto& [a, b, r, root] : found) {
      if (seen.emplace(a, b, r).second) phrases.push_back({static_cast<int>(s), a, b, r, root});
    }
  }
  const auto pairs = candidate_pairs(d);
  const int np = static_cast<int>(phrases.size());
  const int ns = static_cast<int>(d.sentences.size());
  const int nc = static_cast<int>(pairs.size());
  Expected e;
  e.nodes = np + ns + 2 * nc;
  auto& [pp, sp, pe, se, ste, ee] = e.edges;
  for (int a = 0; a < np; ++a) {
    link(sp, a, np + phrases[static_cast<size_t>(a)].sentence);
    for (int b = 0; b < np; ++b) {
      const P& A = phrases[static_cast<size_t>(a)];
      const P& B = phrases[static_cast<size_t>(b)];
      if (a == b || A.sentence != B.sentence) continue;
      const int head = d.sentences[static_cast<size_t>(B.sentence)][static_cast<size_t>(B.root - 1)].head;
      if (head > 0 && A.start <= head - 1 && head - 1 < A.end) link(pp, a, b);
    }
  }
  for (int p = 0; p < nc; ++p) {
    const int node = np + ns + nc + p;
    const EventMention& x = d.event(pairs[static_cast<size_t>(p)].pair.first);
    const EventMention& y = d.event(pairs[static_cast<size_t>(p)].pair.second);
    link(ste, np + ns + p, node);
    link(se, np + x.sentence_index, node);
    link(se, np + y.sentence_index, node);
    for (int a = 0; a < np; ++a) {
      const P& A = phrases[static_cast<size_t>(a)];
      for (const EventMention* ev : {&x, &y}) {
        for (int t = ev->start; t < ev->end; ++t) {
          if (A.sentence == ev->sentence_index && A.start <= t && t < A.end) link(pe, a, node);
        }
      }
    }
    for (int q = 0; q < nc; ++q) {
      if (q == p) continue;
      const EventPair& u = pairs[static_cast<size_t>(p)].pair;
      const EventPair& v = pairs[static_cast<size_t>(q)].pair;
      std::set<std::string> ids = {u.first, u.second, v.first, v.second};
      if (ids.size() < 4) link(ee, node, np + ns + nc + q);
    }
  }
  return e;
}

}  // namespace gimc::testing

#endif  // GIMC_TESTS_ORACLES_H_
