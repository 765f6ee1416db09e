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

#ifndef GIMC_CORPUS_H_
#define GIMC_CORPUS_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gimc {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  int head = 0;  // 0 = root
  std::string deprel;
};

using Sentence = std::vector<Token>;

struct EventMention {
  std::string id;
  int sentence_index = 0;
  int start = 0;  // half-open token range, 0-based positions
  int end = 0;
};

// Unordered pair of event ids, stored with first < second.
struct EventPair {
  std::string first;
  std::string second;

  EventPair() = default;
  EventPair(std::string a, std::string b);
  auto operator<=>(const EventPair&) const = default;
};

struct Document {
  std::string id;
  std::string language;
  std::vector<Sentence> sentences;
  std::vector<EventMention> events;
  std::vector<EventPair> gold_pairs;

  const EventMention& event(const std::string& event_id) const;
  int event_index(const std::string& event_id) const;  // -1 when absent
  bool is_causal(const EventPair& pair) const;
};

using Corpus = std::vector<Document>;

struct CandidatePair {
  EventPair pair;
  bool causal = false;
};

struct BilingualDictionary {
  std::string source_lang;
  std::string target_lang;
  std::map<std::string, std::vector<std::string>> entries;

  // Translations of `word` (lowercased first); nullptr when absent.
  const std::vector<std::string>* lookup(const std::string& word) const;
};

// Throws DataError naming the document, sentence and field on the first
// violated invariant.
void validate_document(const Document& doc);

// True when some sentence's span projection is non-contiguous; reported by
// ingest-validate, not an error.
bool has_non_projective_sentence(const Document& doc);

Document document_from_json(const nlohmann::json& j);
nlohmann::json document_to_json(const Document& doc);

Document load_document(const std::filesystem::path& path);
void save_document(const Document& doc, const std::filesystem::path& path);

// Every "*.gimc.json" file directly under `dir`, validated; ordered by
// filename then document id.
Corpus load_corpus(const std::filesystem::path& dir);

// All C(n,2) unordered pairs in lexicographic order with gold labels.
std::vector<CandidatePair> candidate_pairs(const Document& doc);

BilingualDictionary load_dictionary(const std::filesystem::path& path);
BilingualDictionary parse_dictionary(const std::string& text);

// Source and target languages from a file name like "dict.en-da.txt" or
// "en-da.txt"; empty strings when the name does not carry them.
std::pair<std::string, std::string> dictionary_languages(
    const std::filesystem::path& path);

}  // namespace gimc

#endif  // GIMC_CORPUS_H_
