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

#ifndef GIMC_EMBEDDING_CACHE_H_
#define GIMC_EMBEDDING_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gimc/corpus.h"

namespace gimc {

// Frozen vectors keyed by "<doc>|tok|<sent>|<idx>", "<doc>|stmt|<a>|<b>",
// "<doc>|aspE|<a>|<b>" and "<doc>|aspC|<a>|<b>" (event ids sorted, token
// index 1-based).
//
// On disk: "EMBC", u32 dim_in, then records of [u32 key length, key bytes,
// dim_in float32]; all little-endian.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(uint32_t dim_in) : dim_in_(dim_in) {}

  uint32_t dim_in() const { return dim_in_; }
  size_t size() const { return vectors_.size(); }
  const std::map<std::string, std::vector<float>>& vectors() const { return vectors_; }

  // Throws DataError on width mismatch or duplicate key.
  void add(const std::string& key, std::vector<float> vec);
  const std::vector<float>* find(const std::string& key) const;

  static EmbeddingCache read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  uint32_t dim_in_ = 0;
  std::map<std::string, std::vector<float>> vectors_;
};

std::string token_key(const std::string& doc_id, int sentence, int token_index);
std::string statement_key(const std::string& doc_id, std::string_view kind,
                          const EventPair& pair);

// Token keys the encoder requires for `doc`; statement-level keys are
// optional overrides and listed separately.
std::vector<std::string> required_cache_keys(const Document& doc);
std::vector<std::string> optional_cache_keys(const Document& doc);

}  // namespace gimc

#endif  // GIMC_EMBEDDING_CACHE_H_
