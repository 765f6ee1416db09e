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

#ifndef GIMC_ENCODER_H_
#define GIMC_ENCODER_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gimc/common.h"
#include "gimc/corpus.h"
#include "gimc/phrases.h"

namespace gimc {

class EmbeddingCache;

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kMaskToken = "<mask>";
inline constexpr std::string_view kOpenTag = "<t>";
inline constexpr std::string_view kCloseTag = "</t>";
inline constexpr int kReservedBuckets = 4;

enum class EncoderMode { kToy, kCache };

struct EncoderConfig {
  EncoderMode mode = EncoderMode::kToy;
  int dim_in = 32;
  int dim = 32;
  int hash_buckets = 4096;

  void validate() const;
};

// Hash bucket of a surface form. The four reserved strings own buckets 0-3;
// everything else (lowercased) hashes into [4, hash_buckets).
int token_bucket(std::string_view form, int hash_buckets);

struct Span {
  int start = 0;
  int end = 0;
  auto operator<=>(const Span&) const = default;
};

// The text classified for one event pair: the shared sentence, or the two
// sentences concatenated in document order.
struct Statement {
  EventPair pair;
  std::vector<int> sentences;
  std::vector<std::string> tokens;
  std::vector<std::pair<int, int>> origin;  // (sentence, 0-based position)
  std::array<Span, 2> events;  // in statement coordinates, sorted by start
};

Statement statement_tokens(const EventPair& pair, const Document& doc);

// Phrases of the statement's sentences, re-indexed into statement
// coordinates (sentence_index keeps the document sentence).
std::vector<InformativePhrase> statement_phrases(
    const Statement& statement,
    const std::vector<std::vector<InformativePhrase>>& doc_phrases);

struct TaggedSequence {
  std::vector<std::string> tokens;
  std::vector<Span> spans;  // event words only, tag tokens excluded
};

// Wraps each span in "<t>" ... "</t>". Throws DataError on overlapping or
// out-of-range spans.
TaggedSequence insert_event_tags(const std::vector<std::string>& tokens,
                                 std::vector<Span> spans);

std::vector<std::string> strip_event_tags(const std::vector<std::string>& tokens);

// Weighted sum of input rows: the projected vector is P * sum(w * row).
struct Bag {
  std::vector<std::pair<int, double>> terms;

  static Bag mean_of(const std::vector<int>& rows);
};

// Statement views consumed by the classifier and the contrastive losses.
struct StatementBags {
  Bag cls;             // mean over the tagged statement
  Bag aspect_event;    // mean over the two tagged event spans
  Bag aspect_context;  // tagged statement with event words masked
};

StatementBags toy_statement_bags(const std::vector<std::string>& tokens,
                                 const std::array<Span, 2>& events,
                                 int hash_buckets);

// Parameter-free view of a document: every pooled representation as a Bag
// over either the trainable embedding table (toy) or a frozen per-document
// row table (cache).
struct DocumentInputs {
  const Document* doc = nullptr;
  EncoderMode mode = EncoderMode::kToy;
  std::vector<CandidatePair> pairs;
  std::vector<Statement> statements;  // per pair
  std::vector<std::vector<InformativePhrase>> phrases;  // per sentence
  Mat frozen;  // cache mode rows
  std::vector<std::vector<int>> token_rows;  // [sentence][position]
  std::vector<Bag> event_bags;     // per doc event
  std::vector<Bag> sentence_bags;  // per sentence
  std::vector<StatementBags> statement_bags;  // per pair

  const InformativePhrase& phrase(int sentence, int i) const;
  Bag span_bag(int sentence, int start, int end) const;
};

// In cache mode `cache` must be non-null and hold every token key.
DocumentInputs prepare_inputs(const Document& doc, const EncoderConfig& config,
                              const EmbeddingCache* cache = nullptr);

struct EncoderParams {
  Mat embed;       // hash_buckets x dim_in, toy mode only
  Mat projection;  // dim x dim_in

  static EncoderParams init(const EncoderConfig& config, Rng& rng);
  static EncoderParams zeros_like(const EncoderParams& other);
};

// Input-space vector of a bag (before projection).
Vec bag_input(const Bag& bag, const DocumentInputs& inputs, const EncoderParams& params);
Vec project(const Bag& bag, const DocumentInputs& inputs, const EncoderParams& params);

// Accumulates dL/dP and (toy mode) dL/dembed for an upstream gradient on
// project(bag).
void project_backward(const Bag& bag, const Vec& upstream,
                      const DocumentInputs& inputs, const EncoderParams& params,
                      EncoderParams& grads);

struct EncodedDocument {
  std::vector<std::vector<Vec>> token_vectors;
  std::vector<Vec> event_vectors;
  std::vector<Vec> sentence_vectors;
  std::vector<Vec> statement_vectors;
  std::vector<Vec> aspect_event_vectors;
  std::vector<Vec> aspect_context_vectors;
};

EncodedDocument encode(const DocumentInputs& inputs, const EncoderParams& params);

}  // namespace gimc

#endif  // GIMC_ENCODER_H_
