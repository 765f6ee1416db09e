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

#include "gimc/encoder.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "gimc/embedding_cache.h"

namespace gimc {

void EncoderConfig::validate() const {
  if (dim <= 0 || dim_in <= 0) throw UsageError("encoder widths must be positive");
  if (mode == EncoderMode::kToy && hash_buckets <= kReservedBuckets) {
    throw UsageError("hash_buckets must exceed the 4 reserved slots");
  }
}

int token_bucket(std::string_view form, int hash_buckets) {
  if (form == kPadToken) return 0;
  if (form == kMaskToken) return 1;
  if (form == kOpenTag) return 2;
  if (form == kCloseTag) return 3;
  const uint64_t h = fnv1a(lowercase(form));
  return kReservedBuckets +
         static_cast<int>(h % static_cast<uint64_t>(hash_buckets - kReservedBuckets));
}

Statement statement_tokens(const EventPair& pair, const Document& doc) {
  const EventMention& a = doc.event(pair.first);
  const EventMention& b = doc.event(pair.second);
  Statement st;
  st.pair = pair;
  st.sentences.push_back(std::min(a.sentence_index, b.sentence_index));
  if (a.sentence_index != b.sentence_index) {
    st.sentences.push_back(std::max(a.sentence_index, b.sentence_index));
  }
  std::map<int, int> offset;
  for (int s : st.sentences) {
    offset[s] = static_cast<int>(st.tokens.size());
    const Sentence& sent = doc.sentences[static_cast<size_t>(s)];
    for (size_t i = 0; i < sent.size(); ++i) {
      st.tokens.push_back(sent[i].form);
      st.origin.emplace_back(s, static_cast<int>(i));
    }
  }
  st.events[0] = {offset[a.sentence_index] + a.start, offset[a.sentence_index] + a.end};
  st.events[1] = {offset[b.sentence_index] + b.start, offset[b.sentence_index] + b.end};
  if (st.events[1] < st.events[0]) std::swap(st.events[0], st.events[1]);
  return st;
}

std::vector<InformativePhrase> statement_phrases(
    const Statement& statement,
    const std::vector<std::vector<InformativePhrase>>& doc_phrases) {
  std::vector<InformativePhrase> out;
  int offset = 0;
  for (int s : statement.sentences) {
    for (InformativePhrase p : doc_phrases[static_cast<size_t>(s)]) {
      p.start += offset;
      p.end += offset;
      out.push_back(std::move(p));
    }
    // Statement tokens are laid out sentence by sentence.
    int len = 0;
    for (const auto& o : statement.origin) len += (o.first == s);
    offset += len;
  }
  return out;
}

TaggedSequence insert_event_tags(const std::vector<std::string>& tokens,
                                 std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  const int n = static_cast<int>(tokens.size());
  for (size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start < 0 || spans[i].start >= spans[i].end || spans[i].end > n) {
      throw DataError("event span [" + std::to_string(spans[i].start) + ", " +
                      std::to_string(spans[i].end) + ") out of range");
    }
    if (i > 0 && spans[i].start < spans[i - 1].end) {
      throw DataError("overlapping event spans");
    }
  }
  TaggedSequence out;
  out.tokens.reserve(tokens.size() + 2 * spans.size());
  size_t next = 0;
  for (int i = 0; i < n; ++i) {
    if (next < spans.size() && spans[next].start == i) {
      out.tokens.emplace_back(kOpenTag);
      out.spans.push_back({static_cast<int>(out.tokens.size()), 0});
    }
    out.tokens.push_back(tokens[static_cast<size_t>(i)]);
    if (next < spans.size() && spans[next].end == i + 1) {
      out.spans.back().end = static_cast<int>(out.tokens.size());
      out.tokens.emplace_back(kCloseTag);
      ++next;
    }
  }
  return out;
}

std::vector<std::string> strip_event_tags(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const std::string& t : tokens) {
    if (t != kOpenTag && t != kCloseTag) out.push_back(t);
  }
  return out;
}

Bag Bag::mean_of(const std::vector<int>& rows) {
  Bag bag;
  if (rows.empty()) return bag;
  std::map<int, double> acc;
  const double w = 1.0 / static_cast<double>(rows.size());
  for (int r : rows) acc[r] += w;
  bag.terms.assign(acc.begin(), acc.end());
  return bag;
}

StatementBags toy_statement_bags(const std::vector<std::string>& tokens,
                                 const std::array<Span, 2>& events,
                                 int hash_buckets) {
  const TaggedSequence tagged = insert_event_tags(tokens, {events[0], events[1]});
  std::vector<int> all, aspect, context;
  for (const std::string& t : tagged.tokens) all.push_back(token_bucket(t, hash_buckets));
  context = all;
  for (const Span& s : tagged.spans) {
    for (int i = s.start - 1; i <= s.end; ++i) aspect.push_back(all[static_cast<size_t>(i)]);
    for (int i = s.start; i < s.end; ++i) context[static_cast<size_t>(i)] = 1;  // mask
  }
  return {Bag::mean_of(all), Bag::mean_of(aspect), Bag::mean_of(context)};
}

const InformativePhrase& DocumentInputs::phrase(int sentence, int i) const {
  return phrases[static_cast<size_t>(sentence)][static_cast<size_t>(i)];
}

Bag DocumentInputs::span_bag(int sentence, int start, int end) const {
  const auto& rows = token_rows[static_cast<size_t>(sentence)];
  return Bag::mean_of(std::vector<int>(rows.begin() + start, rows.begin() + end));
}

DocumentInputs prepare_inputs(const Document& doc, const EncoderConfig& config,
                              const EmbeddingCache* cache) {
  config.validate();
  DocumentInputs in;
  in.doc = &doc;
  in.mode = config.mode;
  in.pairs = candidate_pairs(doc);
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    in.phrases.push_back(extract_phrases(doc.sentences[s], static_cast<int>(s)));
  }

  std::vector<const std::vector<float>*> frozen_rows;
  auto frozen_row = [&](const std::vector<float>* v) {
    frozen_rows.push_back(v);
    return static_cast<int>(frozen_rows.size() - 1);
  };
  if (config.mode == EncoderMode::kCache) {
    if (cache == nullptr) throw UsageError("cache mode requires an embedding cache");
    if (static_cast<int>(cache->dim_in()) != config.dim_in) {
      throw DataError("embedding cache width " + std::to_string(cache->dim_in()) +
                      " does not match dim_in " + std::to_string(config.dim_in));
    }
  }

  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    std::vector<int> rows;
    for (const Token& t : doc.sentences[s]) {
      if (config.mode == EncoderMode::kToy) {
        rows.push_back(token_bucket(t.form, config.hash_buckets));
      } else {
        const std::string key = token_key(doc.id, static_cast<int>(s), t.index);
        const auto* v = cache->find(key);
        if (v == nullptr) throw DataError("missing cache key '" + key + "'");
        rows.push_back(frozen_row(v));
      }
    }
    in.token_rows.push_back(std::move(rows));
  }

  for (const EventMention& e : doc.events) {
    in.event_bags.push_back(in.span_bag(e.sentence_index, e.start, e.end));
  }
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    in.sentence_bags.push_back(
        in.span_bag(static_cast<int>(s), 0, static_cast<int>(doc.sentences[s].size())));
  }

  for (const CandidatePair& c : in.pairs) {
    Statement st = statement_tokens(c.pair, doc);
    if (config.mode == EncoderMode::kToy) {
      in.statement_bags.push_back(
          toy_statement_bags(st.tokens, st.events, config.hash_buckets));
    } else {
      // Cached statement vectors take precedence; otherwise pool token rows
      // (tags and the mask token have no cached vectors).
      std::vector<int> all, aspect, context;
      for (size_t i = 0; i < st.origin.size(); ++i) {
        const auto [s, pos] = st.origin[i];
        const int row = in.token_rows[static_cast<size_t>(s)][static_cast<size_t>(pos)];
        all.push_back(row);
        const int p = static_cast<int>(i);
        const bool in_event = (st.events[0].start <= p && p < st.events[0].end) ||
                              (st.events[1].start <= p && p < st.events[1].end);
        (in_event ? aspect : context).push_back(row);
      }
      auto pick = [&](std::string_view kind, const std::vector<int>& fallback) {
        if (const auto* v = cache->find(statement_key(doc.id, kind, c.pair))) {
          return Bag{{{frozen_row(v), 1.0}}};
        }
        return Bag::mean_of(fallback);
      };
      in.statement_bags.push_back({pick("stmt", all), pick("aspE", aspect),
                                   pick("aspC", context)});
    }
    in.statements.push_back(std::move(st));
  }

  if (config.mode == EncoderMode::kCache) {
    in.frozen.resize(static_cast<Eigen::Index>(frozen_rows.size()), config.dim_in);
    for (size_t r = 0; r < frozen_rows.size(); ++r) {
      for (int j = 0; j < config.dim_in; ++j) {
        in.frozen(static_cast<Eigen::Index>(r), j) = (*frozen_rows[r])[static_cast<size_t>(j)];
      }
    }
  }
  return in;
}

EncoderParams EncoderParams::init(const EncoderConfig& config, Rng& rng) {
  EncoderParams p;
  if (config.mode == EncoderMode::kToy) {
    std::normal_distribution<double> normal(0.0, 0.02);
    p.embed.resize(config.hash_buckets, config.dim_in);
    for (Eigen::Index i = 0; i < p.embed.size(); ++i) p.embed.data()[i] = normal(rng);
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.dim_in));
  p.projection.resize(config.dim, config.dim_in);
  for (Eigen::Index i = 0; i < p.projection.size(); ++i) {
    p.projection.data()[i] = (2.0 * uniform_unit(rng) - 1.0) * bound;
  }
  return p;
}

EncoderParams EncoderParams::zeros_like(const EncoderParams& other) {
  return {Mat::Zero(other.embed.rows(), other.embed.cols()),
          Mat::Zero(other.projection.rows(), other.projection.cols())};
}

Vec bag_input(const Bag& bag, const DocumentInputs& inputs, const EncoderParams& params) {
  const Mat& table = inputs.mode == EncoderMode::kToy ? params.embed : inputs.frozen;
  Vec u = Vec::Zero(params.projection.cols());
  for (const auto& [row, w] : bag.terms) u += w * table.row(row).transpose();
  return u;
}

Vec project(const Bag& bag, const DocumentInputs& inputs, const EncoderParams& params) {
  return params.projection * bag_input(bag, inputs, params);
}

void project_backward(const Bag& bag, const Vec& upstream,
                      const DocumentInputs& inputs, const EncoderParams& params,
                      EncoderParams& grads) {
  grads.projection.noalias() += upstream * bag_input(bag, inputs, params).transpose();
  if (inputs.mode != EncoderMode::kToy) return;
  const Vec back = params.projection.transpose() * upstream;
  for (const auto& [row, w] : bag.terms) grads.embed.row(row) += w * back.transpose();
}

EncodedDocument encode(const DocumentInputs& inputs, const EncoderParams& params) {
  EncodedDocument out;
  for (const auto& rows : inputs.token_rows) {
    std::vector<Vec> vs;
    for (int r : rows) vs.push_back(project(Bag{{{r, 1.0}}}, inputs, params));
    out.token_vectors.push_back(std::move(vs));
  }
  for (const Bag& b : inputs.event_bags) out.event_vectors.push_back(project(b, inputs, params));
  for (const Bag& b : inputs.sentence_bags) {
    out.sentence_vectors.push_back(project(b, inputs, params));
  }
  for (const StatementBags& b : inputs.statement_bags) {
    out.statement_vectors.push_back(project(b.cls, inputs, params));
    out.aspect_event_vectors.push_back(project(b.aspect_event, inputs, params));
    out.aspect_context_vectors.push_back(project(b.aspect_context, inputs, params));
  }
  return out;
}

}  // namespace gimc
