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

#include "gimc/embedding_cache.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "gimc/common.h"

namespace gimc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "cache I/O assumes a little-endian host");

void write_u32(std::ostream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

bool read_u32(std::istream& in, uint32_t& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

void EmbeddingCache::add(const std::string& key, std::vector<float> vec) {
  if (vec.size() != dim_in_) {
    throw DataError("cache record '" + key + "' has width " +
                    std::to_string(vec.size()) + ", expected " +
                    std::to_string(dim_in_));
  }
  if (!vectors_.emplace(key, std::move(vec)).second) {
    throw DataError("duplicate cache key '" + key + "'");
  }
}

const std::vector<float>* EmbeddingCache::find(const std::string& key) const {
  auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingCache EmbeddingCache::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding cache " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "EMBC", 4) != 0) {
    throw DataError(path.string() + ": bad magic, expected EMBC");
  }
  uint32_t dim_in = 0;
  if (!read_u32(in, dim_in)) throw DataError(path.string() + ": truncated header");
  EmbeddingCache cache(dim_in);
  uint32_t len = 0;
  while (read_u32(in, len)) {
    std::string key(len, '\0');
    std::vector<float> vec(dim_in);
    if (!in.read(key.data(), len) ||
        !in.read(reinterpret_cast<char*>(vec.data()),
                 static_cast<std::streamsize>(dim_in * sizeof(float)))) {
      throw DataError(path.string() + ": truncated record after " +
                      std::to_string(cache.size()) + " records");
    }
    cache.add(key, std::move(vec));
  }
  if (!in.eof()) throw DataError(path.string() + ": read error");
  return cache;
}

void EmbeddingCache::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write("EMBC", 4);
  write_u32(out, dim_in_);
  for (const auto& [key, vec] : vectors_) {
    write_u32(out, static_cast<uint32_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    out.write(reinterpret_cast<const char*>(vec.data()),
              static_cast<std::streamsize>(vec.size() * sizeof(float)));
  }
}

std::string token_key(const std::string& doc_id, int sentence, int token_index) {
  return doc_id + "|tok|" + std::to_string(sentence) + "|" + std::to_string(token_index);
}

std::string statement_key(const std::string& doc_id, std::string_view kind,
                          const EventPair& pair) {
  return doc_id + "|" + std::string(kind) + "|" + pair.first + "|" + pair.second;
}

std::vector<std::string> required_cache_keys(const Document& doc) {
  std::vector<std::string> keys;
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const Token& t : doc.sentences[s]) {
      keys.push_back(token_key(doc.id, static_cast<int>(s), t.index));
    }
  }
  return keys;
}

std::vector<std::string> optional_cache_keys(const Document& doc) {
  std::vector<std::string> keys;
  for (const CandidatePair& c : candidate_pairs(doc)) {
    for (std::string_view kind : {"stmt", "aspE", "aspC"}) {
      keys.push_back(statement_key(doc.id, kind, c.pair));
    }
  }
  return keys;
}

}  // namespace gimc
