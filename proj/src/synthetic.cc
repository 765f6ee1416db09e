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

#include "gimc/synthetic.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "gimc/common.h"

namespace gimc {

namespace fs = std::filesystem;

namespace {

struct ClassSpec {
  WordClass cls;
  int size;
  bool shared;  // same surface forms in every language
};

// Entity nouns and event verbs are shared across languages; function words,
// adverbs and the two connectors are language-specific.
constexpr std::array<ClassSpec, 7> kClasses = {{
    {WordClass::kDet, 1, false},
    {WordClass::kNoun, 3, true},
    {WordClass::kVerb, 3, true},
    {WordClass::kAdv, 1, false},
    {WordClass::kCue, 1, false},
    {WordClass::kNeutral, 1, false},
    {WordClass::kPunct, 1, true},
}};

constexpr std::array<const char*, 16> kOnsets = {"b", "d", "f", "g", "k", "l", "m", "n",
                                                 "p", "r", "s", "t", "v", "z", "sk", "tr"};
constexpr std::array<const char*, 6> kVowels = {"a", "e", "i", "o", "u", "y"};

std::string pseudo_word(uint64_t h) {
  std::string w;
  const int syllables = 2 + static_cast<int>(h % 2);
  for (int s = 0; s < syllables; ++s) {
    h = splitmix64(h);
    w += kOnsets[h % kOnsets.size()];
    w += kVowels[(h >> 8) % kVowels.size()];
  }
  return w;
}

// Whether `w` is a surface form of some shared class, in any language.
bool shared_form(const std::string& w) {
  static const std::set<std::string> forms = [] {
    std::set<std::string> out;
    std::set<std::string> used;
    for (const ClassSpec& c : kClasses) {
      if (!c.shared || c.cls == WordClass::kPunct) continue;
      for (int i = 0; i < c.size; ++i) {
        const uint64_t h = splitmix64(splitmix64(static_cast<uint64_t>(c.cls) * 1000 +
                                                 static_cast<uint64_t>(i)));
        std::string form = pseudo_word(h);
        for (uint64_t bump = 1; used.count(form); ++bump) form = pseudo_word(h + bump);
        used.insert(form);
        out.insert(form);
      }
    }
    return out;
  }();
  return forms.count(w) > 0;
}

}  // namespace

Lexicon::Lexicon(const std::string& language) : language_(language) {
  std::set<std::string> used = {"."};
  for (const ClassSpec& c : kClasses) {
    auto& list = words_[c.cls];
    for (int i = 0; i < c.size; ++i) {
      if (c.cls == WordClass::kPunct) {
        list.emplace_back(".");
        continue;
      }
      const uint64_t salt = c.shared ? 0 : fnv1a(language);
      const uint64_t h = splitmix64(
          salt ^ splitmix64(static_cast<uint64_t>(c.cls) * 1000 + static_cast<uint64_t>(i)));
      std::string w = pseudo_word(h);
      // Per-language words also avoid the shared forms of the other classes.
      for (uint64_t bump = 1; used.count(w) || (!c.shared && shared_form(w)); ++bump) {
        w = pseudo_word(h + bump);
      }
      used.insert(w);
      list.push_back(std::move(w));
    }
  }
}

const std::string& Lexicon::word(WordClass cls, int i) const {
  return words_.at(cls).at(static_cast<size_t>(i));
}

int Lexicon::size(WordClass cls) const { return static_cast<int>(words_.at(cls).size()); }

namespace {

struct ProtoToken {
  WordClass cls;
  int word;
  int head;  // position in the sentence, -1 for root
  std::string deprel;
};

class SentenceBuilder {
 public:
  SentenceBuilder(Rng& rng, const Lexicon& lex) : rng_(rng), lex_(lex) {}

  int add(WordClass cls, const std::string& deprel) {
    return add_word(cls, static_cast<int>(uniform_index(rng_, static_cast<size_t>(lex_.size(cls)))),
                    deprel);
  }
  int add_word(WordClass cls, int word, const std::string& deprel) {
    tokens_.push_back({cls, word, -1, deprel});
    return static_cast<int>(tokens_.size()) - 1;
  }
  void attach(int dependent, int head) { tokens_[static_cast<size_t>(dependent)].head = head; }

  // det noun, returning the noun position.
  int noun_phrase(const std::string& deprel) {
    const int det = add(WordClass::kDet, "det");
    const int noun = add(WordClass::kNoun, deprel);
    attach(det, noun);
    return noun;
  }

  Sentence render() const {
    Sentence s;
    for (size_t i = 0; i < tokens_.size(); ++i) {
      const ProtoToken& p = tokens_[i];
      s.push_back({static_cast<int>(i) + 1, lex_.word(p.cls, p.word), p.head + 1, p.deprel});
    }
    return s;
  }

 private:
  Rng& rng_;
  const Lexicon& lex_;
  std::vector<ProtoToken> tokens_;
};

enum class SentenceKind { kPair, kSingle, kFiller };

struct BuiltSentence {
  Sentence tokens;
  std::vector<int> event_positions;  // 0-based
};

// Pair:   det noun VERB(root) CONN VERB(advcl) det noun adv .
// Single: det noun VERB(root) det noun adv .
// Filler: det noun VERB(root) det noun .
BuiltSentence build_sentence(SentenceKind kind, bool cue, Rng& rng, const Lexicon& lex) {
  SentenceBuilder b(rng, lex);
  BuiltSentence out;
  const int subj = b.noun_phrase("nsubj");
  const int verb = b.add(WordClass::kVerb, "root");
  b.attach(subj, verb);
  if (kind == SentenceKind::kPair) {
    const int conn = b.add_word(cue ? WordClass::kCue : WordClass::kNeutral, 0, "mark");
    const int verb2 = b.add(WordClass::kVerb, "advcl");
    b.attach(conn, verb2);
    b.attach(verb2, verb);
    b.attach(b.noun_phrase("obj"), verb2);
    out.event_positions = {verb, verb2};
  } else {
    b.attach(b.noun_phrase("obj"), verb);
    if (kind == SentenceKind::kSingle) out.event_positions = {verb};
  }
  if (kind != SentenceKind::kFiller) b.attach(b.add(WordClass::kAdv, "advmod"), verb);
  b.attach(b.add(WordClass::kPunct, "punct"), verb);
  out.tokens = b.render();
  return out;
}

Document generate_document(const std::string& id, const Lexicon& lex, const SyntheticSpec& spec,
                           Rng& rng) {
  std::vector<SentenceKind> kinds;
  for (int e = 0; e + 1 < spec.events_per_doc; e += 2) kinds.push_back(SentenceKind::kPair);
  if (spec.events_per_doc % 2 == 1) kinds.push_back(SentenceKind::kSingle);
  const int fillers = 1 + static_cast<int>(uniform_index(rng, 2));
  for (int f = 0; f < fillers; ++f) kinds.push_back(SentenceKind::kFiller);
  for (size_t i = kinds.size(); i > 1; --i) std::swap(kinds[i - 1], kinds[uniform_index(rng, i)]);

  std::vector<size_t> pair_sentences;
  for (size_t s = 0; s < kinds.size(); ++s) {
    if (kinds[s] == SentenceKind::kPair) pair_sentences.push_back(s);
  }
  const int causal = pair_sentences.empty()
                         ? -1
                         : static_cast<int>(pair_sentences[uniform_index(rng, pair_sentences.size())]);

  Document doc;
  doc.id = id;
  doc.language = lex.language();
  int next_event = 1;
  for (size_t s = 0; s < kinds.size(); ++s) {
    const bool is_causal = static_cast<int>(s) == causal;
    const bool cue = is_causal && uniform_unit(rng) < spec.cue_strength;
    BuiltSentence built = build_sentence(kinds[s], cue, rng, lex);
    std::vector<std::string> ids;
    for (int pos : built.event_positions) {
      ids.push_back("e" + std::to_string(next_event++));
      doc.events.push_back({ids.back(), static_cast<int>(s), pos, pos + 1});
    }
    if (is_causal) doc.gold_pairs.emplace_back(ids[0], ids[1]);
    doc.sentences.push_back(std::move(built.tokens));
  }
  return doc;
}

}  // namespace

BilingualDictionary lexicon_dictionary(const Lexicon& source, const Lexicon& target) {
  BilingualDictionary d;
  d.source_lang = source.language();
  d.target_lang = target.language();
  for (const ClassSpec& c : kClasses) {
    for (int i = 0; i < c.size; ++i) {
      d.entries[source.word(c.cls, i)].push_back(target.word(c.cls, i));
    }
  }
  return d;
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.languages.empty()) throw UsageError("gen-synthetic needs at least one language");
  if (spec.events_per_doc < 0 || spec.docs_per_language < 0) {
    throw UsageError("gen-synthetic counts must be non-negative");
  }
  SyntheticCorpus out;
  std::vector<Lexicon> lexicons;
  for (const std::string& lang : spec.languages) lexicons.emplace_back(lang);
  for (const Lexicon& lex : lexicons) {
    Rng rng(splitmix64(spec.seed ^ fnv1a(lex.language())));
    Corpus corpus;
    for (int d = 0; d < spec.docs_per_language; ++d) {
      std::ostringstream id;
      id << lex.language() << "-s" << spec.seed << "-" << std::setw(4) << std::setfill('0') << d;
      corpus.push_back(generate_document(id.str(), lex, spec, rng));
    }
    out.corpora[lex.language()] = std::move(corpus);
  }
  for (const Lexicon& a : lexicons) {
    for (const Lexicon& b : lexicons) {
      if (a.language() != b.language()) out.dictionaries.push_back(lexicon_dictionary(a, b));
    }
  }
  return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [lang, docs] : corpus.corpora) {
    fs::create_directories(dir / lang);
    for (const Document& doc : docs) save_document(doc, dir / lang / (doc.id + ".gimc.json"));
  }
  for (const BilingualDictionary& d : corpus.dictionaries) {
    std::ofstream out(dir / ("dict." + d.source_lang + "-" + d.target_lang + ".txt"));
    if (!out) throw DataError("cannot write dictionary under " + dir.string());
    for (const auto& [src, targets] : d.entries) {
      for (const std::string& t : targets) out << src << ' ' << t << '\n';
    }
  }
}

Document translate_document(const Document& doc, const BilingualDictionary& dict,
                            const std::string& target_language) {
  Document out = doc;
  out.language = target_language;
  for (Sentence& s : out.sentences) {
    for (Token& t : s) {
      const auto* tr = dict.lookup(t.form);
      if (tr == nullptr) throw DataError("no translation for '" + t.form + "'");
      t.form = tr->front();
    }
  }
  return out;
}

}  // namespace gimc
