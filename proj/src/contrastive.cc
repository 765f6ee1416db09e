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

#include "gimc/contrastive.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gimc {

void ContrastiveConfig::validate() const {
  if (!(temperature > 0.0)) throw UsageError("temperature must be positive");
  if (n_positives < 1 || k_negatives < 1) {
    throw UsageError("contrastive sampling needs n >= 1 positives and K >= 1 negatives");
  }
}

std::vector<std::string> code_switch_phrase(const std::vector<std::string>& tokens,
                                            const BilingualDictionary& dict, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& w : tokens) {
    const auto* translations = dict.lookup(w);
    if (translations == nullptr) {
      out.push_back(w);
    } else {
      out.push_back((*translations)[uniform_index(rng, translations->size())]);
    }
  }
  return out;
}

std::vector<std::string> code_switch_statement(const std::vector<std::string>& tokens,
                                               const std::vector<InformativePhrase>& phrases,
                                               const DictionaryList& dicts, Rng& rng) {
  if (dicts.empty()) throw UsageError("code-switching needs at least one dictionary");
  std::vector<InformativePhrase> order = phrases;
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  std::vector<std::string> out = tokens;
  std::vector<bool> done(tokens.size(), false);
  for (const InformativePhrase& ph : order) {
    const BilingualDictionary& dict = dicts[uniform_index(rng, dicts.size())];
    std::vector<std::string> words;
    std::vector<size_t> slots;
    for (int i = ph.start; i < ph.end; ++i) {
      if (!done[static_cast<size_t>(i)]) {
        words.push_back(tokens[static_cast<size_t>(i)]);
        slots.push_back(static_cast<size_t>(i));
      }
    }
    const std::vector<std::string> switched = code_switch_phrase(words, dict, rng);
    for (size_t t = 0; t < slots.size(); ++t) {
      out[slots[t]] = switched[t];
      done[slots[t]] = true;
    }
  }
  return out;
}

std::vector<SampledStatement> generate_positives(const Statement& anchor, int anchor_index,
                                                 const std::vector<InformativePhrase>& phrases,
                                                 const DictionaryList& dicts,
                                                 const ContrastiveConfig& config, Rng& rng) {
  if (dicts.empty()) throw UsageError("no bilingual dictionaries configured");
  std::vector<SampledStatement> out;
  for (int j = 0; j < config.n_positives; ++j) {
    out.push_back({anchor_index, true,
                   code_switch_statement(anchor.tokens, phrases, dicts, rng), anchor.events});
  }
  return out;
}

namespace {

bool share_sentence(const Statement& a, const Statement& b) {
  for (int s : a.sentences) {
    if (std::find(b.sentences.begin(), b.sentences.end(), s) != b.sentences.end()) return true;
  }
  return false;
}

}  // namespace

std::vector<SampledStatement> select_negatives(const DocumentInputs& inputs, int anchor_index,
                                               const DictionaryList& dicts,
                                               const ContrastiveConfig& config, Rng& rng) {
  const Statement& anchor = inputs.statements[static_cast<size_t>(anchor_index)];
  std::vector<int> eligible;
  for (size_t q = 0; q < inputs.pairs.size(); ++q) {
    if (!inputs.pairs[q].causal && !share_sentence(anchor, inputs.statements[q])) {
      eligible.push_back(static_cast<int>(q));
    }
  }
  std::vector<SampledStatement> out;
  if (eligible.empty()) return out;

  const size_t take = std::min(eligible.size(), static_cast<size_t>(config.k_negatives));
  for (size_t t = 0; t < take; ++t) {
    std::swap(eligible[t], eligible[t + uniform_index(rng, eligible.size() - t)]);
    const Statement& st = inputs.statements[static_cast<size_t>(eligible[t])];
    out.push_back({eligible[t], false, st.tokens, st.events});
  }
  for (size_t t = 0; out.size() < static_cast<size_t>(config.k_negatives); ++t) {
    const SampledStatement& base = out[t % take];
    const Statement& st = inputs.statements[static_cast<size_t>(base.pair_index)];
    SampledStatement copy{base.pair_index, !dicts.empty(), st.tokens, st.events};
    if (!dicts.empty()) {
      copy.tokens = code_switch_statement(st.tokens, statement_phrases(st, inputs.phrases),
                                          dicts, rng);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

AnchorSampling build_anchor_sets(const DocumentInputs& inputs, const DictionaryList& dicts,
                                 const ContrastiveConfig& config, int hash_buckets, Rng& rng) {
  config.validate();
  if (inputs.mode != EncoderMode::kToy) {
    throw UsageError("contrastive sampling needs the toy encoder (switched text has no cache)");
  }
  AnchorSampling result;
  for (size_t p = 0; p < inputs.pairs.size(); ++p) {
    if (!inputs.pairs[p].causal) continue;
    const int anchor = static_cast<int>(p);
    const Statement& st = inputs.statements[p];
    AnchorSet set;
    set.anchor = anchor;
    set.negatives = select_negatives(inputs, anchor, dicts, config, rng);
    if (set.negatives.empty()) {
      ++result.skipped;
      continue;
    }
    set.positives = generate_positives(st, anchor, statement_phrases(st, inputs.phrases), dicts,
                                       config, rng);
    for (const auto& s : set.positives) {
      set.positive_bags.push_back(toy_statement_bags(s.tokens, s.events, hash_buckets));
    }
    for (const auto& s : set.negatives) {
      set.negative_bags.push_back(toy_statement_bags(s.tokens, s.events, hash_buckets));
    }
    result.sets.push_back(std::move(set));
  }
  return result;
}

namespace {

// log s(u, v) with its partial derivatives.
struct LogSim {
  double value;
  Vec d_u;
  Vec d_v;
};

LogSim log_sim(const Vec& u, const Vec& v, const ContrastiveConfig& config) {
  if (u.size() != v.size()) throw NumericError("similarity of vectors with unequal widths");
  if (config.raw_dot) {
    const double d = u.dot(v);
    if (!(d > 0.0)) {
      throw NumericError("raw dot-product similarity is non-positive (" + std::to_string(d) + ")");
    }
    return {std::log(d), v / d, u / d};
  }
  const double tau = config.temperature;
  if (!config.normalize) return {u.dot(v) / tau, v / tau, u / tau};
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw NumericError("cosine similarity of a zero vector");
  const Vec uh = u / nu;
  const Vec vh = v / nv;
  const double c = uh.dot(vh);
  return {c / tau, (vh - c * uh) / (nu * tau), (uh - c * vh) / (nv * tau)};
}

}  // namespace

double sim(const Vec& u, const Vec& v, const ContrastiveConfig& config) {
  return std::exp(log_sim(u, v, config).value);
}

ContrastiveLoss contrastive_loss(const Vec& anchor, const std::vector<Vec>& positives,
                                 const std::vector<Vec>& negatives,
                                 const ContrastiveConfig& config) {
  if (positives.empty() || negatives.empty()) {
    throw UsageError("contrastive loss needs at least one positive and one negative");
  }
  ContrastiveLoss out;
  out.grad_anchor = Vec::Zero(anchor.size());
  out.grad_positives.assign(positives.size(), Vec::Zero(anchor.size()));
  out.grad_negatives.assign(negatives.size(), Vec::Zero(anchor.size()));

  std::vector<LogSim> neg;
  for (const Vec& n : negatives) neg.push_back(log_sim(anchor, n, config));
  for (size_t j = 0; j < positives.size(); ++j) {
    const LogSim pos = log_sim(anchor, positives[j], config);
    // term = -l_p + logsumexp(l_p, l_n...)
    double top = pos.value;
    for (const LogSim& n : neg) top = std::max(top, n.value);
    double z = std::exp(pos.value - top);
    for (const LogSim& n : neg) z += std::exp(n.value - top);
    out.value += -pos.value + top + std::log(z);

    const double w_pos = std::exp(pos.value - top) / z - 1.0;
    out.grad_anchor += w_pos * pos.d_u;
    out.grad_positives[j] += w_pos * pos.d_v;
    for (size_t k = 0; k < neg.size(); ++k) {
      const double w = std::exp(neg[k].value - top) / z;
      out.grad_anchor += w * neg[k].d_u;
      out.grad_negatives[k] += w * neg[k].d_v;
    }
  }
  return out;
}

}  // namespace gimc
