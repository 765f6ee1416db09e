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

#ifndef GIMC_SYNTHETIC_H_
#define GIMC_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gimc/corpus.h"

namespace gimc {

struct SyntheticSpec {
  std::vector<std::string> languages = {"en"};
  int docs_per_language = 8;
  int events_per_doc = 4;
  // Probability that the causal sentence carries the cue word rather than
  // the neutral connector.
  double cue_strength = 1.0;
  uint64_t seed = 1;
};

// Word classes of the generated lexicons. Word i of a class in one language
// translates to word i of the same class in every other language.
enum class WordClass { kDet, kNoun, kVerb, kAdv, kCue, kNeutral, kPunct };

class Lexicon {
 public:
  // Depends only on the language code, so corpora generated with different
  // seeds share a vocabulary.
  explicit Lexicon(const std::string& language);

  const std::string& language() const { return language_; }
  const std::string& word(WordClass cls, int i) const;
  int size(WordClass cls) const;

 private:
  std::string language_;
  std::map<WordClass, std::vector<std::string>> words_;
};

struct SyntheticCorpus {
  std::map<std::string, Corpus> corpora;  // by language
  std::vector<BilingualDictionary> dictionaries;  // one per ordered language pair
};

// Each document holds ceil(E/2) event sentences (two events joined by a
// connector, or one event for odd E) plus filler sentences. Exactly one
// two-event sentence is causal; its connector is the planted cue with
// probability cue_strength. All other connectors are neutral.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// <dir>/<lang>/<id>.gimc.json and <dir>/dict.<src>-<tgt>.txt.
void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

BilingualDictionary lexicon_dictionary(const Lexicon& source, const Lexicon& target);

// Word-by-word translation of a document through `dict` (first translation).
Document translate_document(const Document& doc, const BilingualDictionary& dict,
                            const std::string& target_language);

}  // namespace gimc

#endif  // GIMC_SYNTHETIC_H_
