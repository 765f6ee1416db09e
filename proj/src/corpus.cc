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

#include "gimc/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "gimc/common.h"

namespace gimc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

EventPair::EventPair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  first = std::move(a);
  second = std::move(b);
}

const EventMention& Document::event(const std::string& event_id) const {
  const int i = event_index(event_id);
  if (i < 0) {
    throw DataError("document " + id + ": unknown event id '" + event_id + "'");
  }
  return events[static_cast<size_t>(i)];
}

int Document::event_index(const std::string& event_id) const {
  for (size_t i = 0; i < events.size(); ++i) {
    if (events[i].id == event_id) return static_cast<int>(i);
  }
  return -1;
}

bool Document::is_causal(const EventPair& pair) const {
  return std::find(gold_pairs.begin(), gold_pairs.end(), pair) !=
         gold_pairs.end();
}

const std::vector<std::string>* BilingualDictionary::lookup(
    const std::string& word) const {
  auto it = entries.find(lowercase(word));
  return it == entries.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void reject(const Document& doc, const std::string& where,
                         const std::string& what) {
  throw DataError("document " + doc.id + ": " + where + ": " + what);
}

std::string sentence_where(size_t s) {
  return "sentence " + std::to_string(s);
}

void validate_tree(const Document& doc, size_t s) {
  const Sentence& sent = doc.sentences[s];
  const int n = static_cast<int>(sent.size());
  if (n == 0) reject(doc, sentence_where(s), "empty sentence");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = sent[static_cast<size_t>(i)];
    const std::string where =
        sentence_where(s) + ", token " + std::to_string(i + 1);
    if (t.index != i + 1) {
      reject(doc, where, "field index: expected " + std::to_string(i + 1) +
                             ", got " + std::to_string(t.index));
    }
    if (t.head == t.index) reject(doc, where, "self-headed token");
    if (t.head < 0 || t.head > n) {
      reject(doc, where, "field head out of range: " + std::to_string(t.head));
    }
    if (t.deprel.empty()) reject(doc, where, "field deprel is empty");
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    reject(doc, sentence_where(s),
           "expected exactly one root token, found " + std::to_string(roots));
  }
  // Every token must reach the root within n steps.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0) {
      cur = sent[static_cast<size_t>(cur - 1)].head;
      if (++steps > n) {
        reject(doc, sentence_where(s) + ", token " + std::to_string(i),
               "cyclic dependency tree");
      }
    }
  }
}

Token token_from_json(const json& j, const Document& doc, size_t s) {
  const std::string where = sentence_where(s);
  if (!j.is_object()) reject(doc, where, "token is not an object");
  Token t;
  for (const char* key : {"index", "form", "head", "deprel"}) {
    if (!j.contains(key)) reject(doc, where, std::string("missing field ") + key);
  }
  if (!j["index"].is_number_integer()) reject(doc, where, "field index is not an integer");
  if (!j["head"].is_number_integer()) reject(doc, where, "field head is not an integer");
  if (!j["form"].is_string()) reject(doc, where, "field form is not a string");
  if (!j["deprel"].is_string()) reject(doc, where, "field deprel is not a string");
  t.index = j["index"].get<int>();
  t.form = j["form"].get<std::string>();
  t.head = j["head"].get<int>();
  t.deprel = j["deprel"].get<std::string>();
  return t;
}

}  // namespace

void validate_document(const Document& doc) {
  if (doc.id.empty()) throw DataError("document with empty id");
  if (doc.language.empty()) reject(doc, "header", "field language is empty");
  for (size_t s = 0; s < doc.sentences.size(); ++s) validate_tree(doc, s);

  std::set<std::string> ids;
  for (const EventMention& e : doc.events) {
    const std::string where = "event " + e.id;
    if (e.id.empty()) reject(doc, "events", "event with empty id");
    if (!ids.insert(e.id).second) reject(doc, where, "duplicate event id");
    if (e.sentence_index < 0 ||
        e.sentence_index >= static_cast<int>(doc.sentences.size())) {
      reject(doc, where, "field sentence_index out of range");
    }
    const int len =
        static_cast<int>(doc.sentences[static_cast<size_t>(e.sentence_index)].size());
    if (e.start < 0 || e.start >= e.end || e.end > len) {
      reject(doc, where + ", " + sentence_where(static_cast<size_t>(e.sentence_index)),
             "field start/end: span [" + std::to_string(e.start) + ", " +
                 std::to_string(e.end) + ") invalid for sentence length " +
                 std::to_string(len));
    }
  }
  for (size_t a = 0; a < doc.events.size(); ++a) {
    for (size_t b = a + 1; b < doc.events.size(); ++b) {
      const EventMention& x = doc.events[a];
      const EventMention& y = doc.events[b];
      if (x.sentence_index == y.sentence_index && x.start < y.end &&
          y.start < x.end) {
        reject(doc, "event " + x.id + ", " + sentence_where(static_cast<size_t>(x.sentence_index)),
               "span overlaps event " + y.id);
      }
    }
  }
  std::set<EventPair> seen;
  for (const EventPair& p : doc.gold_pairs) {
    const std::string where = "relation (" + p.first + ", " + p.second + ")";
    if (p.first == p.second) reject(doc, where, "relation links an event to itself");
    if (!ids.count(p.first) || !ids.count(p.second)) {
      reject(doc, where, "relation references an unknown event id");
    }
    if (!seen.insert(p).second) reject(doc, where, "duplicate relation");
  }
}

bool has_non_projective_sentence(const Document& doc) {
  for (const Sentence& sent : doc.sentences) {
    const int n = static_cast<int>(sent.size());
    for (int i = 1; i <= n; ++i) {
      // Subtree of i must be a contiguous range.
      int lo = i, hi = i, count = 0;
      for (int j = 1; j <= n; ++j) {
        int cur = j;
        while (cur != 0 && cur != i) cur = sent[static_cast<size_t>(cur - 1)].head;
        if (cur == i) {
          lo = std::min(lo, j);
          hi = std::max(hi, j);
          ++count;
        }
      }
      if (hi - lo + 1 != count) return true;
    }
  }
  return false;
}

Document document_from_json(const json& j) {
  Document doc;
  if (!j.is_object()) throw DataError("document is not a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) {
    throw DataError("document: missing or non-string field id");
  }
  doc.id = j["id"].get<std::string>();
  if (!j.contains("language") || !j["language"].is_string()) {
    reject(doc, "header", "missing or non-string field language");
  }
  doc.language = j["language"].get<std::string>();
  for (const char* key : {"sentences", "events", "relations"}) {
    if (!j.contains(key) || !j[key].is_array()) {
      reject(doc, "header", std::string("missing or non-array field ") + key);
    }
  }
  for (size_t s = 0; s < j["sentences"].size(); ++s) {
    const json& js = j["sentences"][s];
    if (!js.is_array()) reject(doc, sentence_where(s), "sentence is not an array");
    Sentence sent;
    for (const json& jt : js) sent.push_back(token_from_json(jt, doc, s));
    doc.sentences.push_back(std::move(sent));
  }
  for (const json& je : j["events"]) {
    if (!je.is_object()) reject(doc, "events", "event is not an object");
    EventMention e;
    if (!je.contains("id") || !je["id"].is_string()) {
      reject(doc, "events", "missing or non-string field id");
    }
    e.id = je["id"].get<std::string>();
    for (const char* key : {"sentence_index", "start", "end"}) {
      if (!je.contains(key) || !je[key].is_number_integer()) {
        reject(doc, "event " + e.id, std::string("missing or non-integer field ") + key);
      }
    }
    e.sentence_index = je["sentence_index"].get<int>();
    e.start = je["start"].get<int>();
    e.end = je["end"].get<int>();
    doc.events.push_back(std::move(e));
  }
  for (const json& jr : j["relations"]) {
    if (!jr.is_object() || !jr.contains("a") || !jr.contains("b") ||
        !jr["a"].is_string() || !jr["b"].is_string()) {
      reject(doc, "relations", "relation must be an object with string fields a, b");
    }
    // Any direction annotation is dropped; pairs are unordered.
    doc.gold_pairs.emplace_back(jr["a"].get<std::string>(), jr["b"].get<std::string>());
  }
  return doc;
}

json document_to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["language"] = doc.language;
  j["sentences"] = json::array();
  for (const Sentence& sent : doc.sentences) {
    json js = json::array();
    for (const Token& t : sent) {
      js.push_back({{"index", t.index}, {"form", t.form}, {"head", t.head},
                    {"deprel", t.deprel}});
    }
    j["sentences"].push_back(std::move(js));
  }
  j["events"] = json::array();
  for (const EventMention& e : doc.events) {
    j["events"].push_back({{"id", e.id}, {"sentence_index", e.sentence_index},
                           {"start", e.start}, {"end", e.end}});
  }
  j["relations"] = json::array();
  for (const EventPair& p : doc.gold_pairs) {
    j["relations"].push_back({{"a", p.first}, {"b", p.second}});
  }
  return j;
}

Document load_document(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open document " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  Document doc = document_from_json(j);
  validate_document(doc);
  return doc;
}

void save_document(const Document& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << document_to_json(doc).dump(1) << '\n';
}

Corpus load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("corpus directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 10 &&
        name.ends_with(".gimc.json")) {
      files.push_back(entry.path());
    }
  }
  std::vector<std::pair<std::string, Document>> keyed;
  for (const fs::path& f : files) {
    keyed.emplace_back(f.filename().string(), load_document(f));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.id) < std::tie(b.first, b.second.id);
  });
  Corpus corpus;
  for (auto& [name, doc] : keyed) corpus.push_back(std::move(doc));
  return corpus;
}

std::vector<CandidatePair> candidate_pairs(const Document& doc) {
  std::vector<std::string> ids;
  for (const EventMention& e : doc.events) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  std::vector<CandidatePair> out;
  for (size_t a = 0; a < ids.size(); ++a) {
    for (size_t b = a + 1; b < ids.size(); ++b) {
      CandidatePair c;
      c.pair = EventPair(ids[a], ids[b]);
      c.causal = doc.is_causal(c.pair);
      out.push_back(std::move(c));
    }
  }
  return out;
}

BilingualDictionary parse_dictionary(const std::string& text) {
  BilingualDictionary dict;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    std::string f;
    while (fields >> f) parts.push_back(f);
    if (parts.size() != 2) {
      throw DataError("dictionary line " + std::to_string(lineno) +
                      ": expected 2 fields, got " + std::to_string(parts.size()));
    }
    dict.entries[lowercase(parts[0])].push_back(lowercase(parts[1]));
  }
  return dict;
}

std::pair<std::string, std::string> dictionary_languages(const fs::path& path) {
  std::string stem = path.filename().string();
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.resize(dot);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(dot + 1);
  const auto dash = stem.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == stem.size()) {
    return {"", ""};
  }
  return {stem.substr(0, dash), stem.substr(dash + 1)};
}

BilingualDictionary load_dictionary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dictionary " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  BilingualDictionary dict;
  try {
    dict = parse_dictionary(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  std::tie(dict.source_lang, dict.target_lang) = dictionary_languages(path);
  return dict;
}

}  // namespace gimc
