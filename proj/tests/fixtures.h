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


// Random and hand-built fixtures shared by the test binaries.

#ifndef GIMC_TESTS_FIXTURES_H_
#define GIMC_TESTS_FIXTURES_H_

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gimc/common.h"
#include "gimc/corpus.h"

namespace gimc::testing {

inline const std::vector<std::string>& relation_pool() {
  static const std::vector<std::string> pool = {
      "nsubj", "obj",  "obl",   "advcl", "advmod", "amod",  "det",      "case",
      "mark",  "conj", "acl",   "appos", "punct",  "cc",    "acl:relcl", "obl:agent",
      "iobj",  "list", "nmod",  "parataxis"};
  return pool;
}

// Random tree over n tokens: a random permutation fixes the attachment
// order, every later token picks a head among the earlier ones.
inline Sentence random_sentence(Rng& rng, int n) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  Sentence s(static_cast<size_t>(n));
  const auto& pool = relation_pool();
  for (int k = 0; k < n; ++k) {
    const int idx = order[static_cast<size_t>(k)];
    Token& t = s[static_cast<size_t>(idx - 1)];
    t.index = idx;
    t.form = "w" + std::to_string(idx);
    if (k == 0) {
      t.head = 0;
      t.deprel = "root";
    } else {
      t.head = order[uniform_index(rng, static_cast<size_t>(k))];
      t.deprel = pool[uniform_index(rng, pool.size())];
    }
  }
  return s;
}

// Subtree of `token` (1-based) by repeated parent-pointer walks.
inline std::set<int> subtree(const Sentence& s, int token) {
  std::set<int> out;
  for (const Token& t : s) {
    int cur = t.index;
    while (cur != 0) {
      if (cur == token) {
        out.insert(t.index);
        break;
      }
      cur = s[static_cast<size_t>(cur - 1)].head;
    }
  }
  return out;
}

// Random valid document: sentences of 3-9 tokens, single-token or short
// non-overlapping events, random gold pairs.
inline Document random_document(Rng& rng, int max_sentences = 4, int max_events = 5) {
  Document d;
  d.id = "rand" + std::to_string(rng() % 100000);
  d.language = "en";
  const int ns = 1 + static_cast<int>(uniform_index(rng, static_cast<size_t>(max_sentences)));
  for (int s = 0; s < ns; ++s) {
    d.sentences.push_back(random_sentence(rng, 3 + static_cast<int>(uniform_index(rng, 7))));
  }
  const int ne = static_cast<int>(uniform_index(rng, static_cast<size_t>(max_events + 1)));
  std::vector<std::vector<bool>> used(static_cast<size_t>(ns));
  for (int s = 0; s < ns; ++s) used[static_cast<size_t>(s)].assign(d.sentences[static_cast<size_t>(s)].size(), false);
  for (int e = 0; e < ne; ++e) {
    const int s = static_cast<int>(uniform_index(rng, static_cast<size_t>(ns)));
    auto& u = used[static_cast<size_t>(s)];
    const int start = static_cast<int>(uniform_index(rng, u.size()));
    const int len = 1 + static_cast<int>(uniform_index(rng, 2));
    const int end = std::min<int>(start + len, static_cast<int>(u.size()));
    bool free = true;
    for (int i = start; i < end; ++i) free = free && !u[static_cast<size_t>(i)];
    if (!free) continue;
    for (int i = start; i < end; ++i) u[static_cast<size_t>(i)] = true;
    d.events.push_back({"e" + std::to_string(d.events.size() + 1), s, start, end});
  }
  for (size_t i = 0; i < d.events.size(); ++i) {
    for (size_t j = i + 1; j < d.events.size(); ++j) {
      if (uniform_index(rng, 4) == 0) d.gold_pairs.emplace_back(d.events[i].id, d.events[j].id);
    }
  }
  return d;
}

// Chain sentence "<prefix>1 ... <prefix>n": token 1 is the root, every
// other token an nsubj of its predecessor.
inline Sentence chain_sentence(int n, const std::string& prefix) {
  Sentence s;
  for (int i = 1; i <= n; ++i) {
    s.push_back({i, prefix + std::to_string(i), i - 1, i == 1 ? "root" : "nsubj"});
  }
  return s;
}

// One chain sentence of `width` tokens per entry of `sentences`; entry s
// lists how many single-token events sentence s carries (at positions
// 0, 1, ...). Events are numbered e1, e2, ... in sentence order.
inline Document chain_document(const std::vector<int>& sentences,
                               const std::vector<std::pair<int, int>>& gold, int width = 6) {
  Document d;
  d.id = "chain";
  d.language = "en";
  for (size_t s = 0; s < sentences.size(); ++s) {
    d.sentences.push_back(chain_sentence(width, "s" + std::to_string(s) + "w"));
    for (int k = 0; k < sentences[s]; ++k) {
      d.events.push_back({"e" + std::to_string(d.events.size() + 1), static_cast<int>(s), k, k + 1});
    }
  }
  for (const auto& [a, b] : gold) {
    d.gold_pairs.emplace_back("e" + std::to_string(a), "e" + std::to_string(b));
  }
  return d;
}

}  // namespace gimc::testing

#endif  // GIMC_TESTS_FIXTURES_H_
