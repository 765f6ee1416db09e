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


#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "gimc/checkpoint.h"

using namespace gimc;

namespace {

// Splits serialized bytes into the 8-byte header and one blob per tensor.
struct Blobs {
  std::string header;
  std::vector<std::pair<std::string, std::string>> tensors;

  std::string join() const {
    std::string out = header;
    for (const auto& t : tensors) out += t.second;
    return out;
  }
};

uint32_t u32(const std::string& b, size_t pos) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[pos + static_cast<size_t>(i)]);
  return v;
}

Blobs split(const std::string& b) {
  Blobs out{b.substr(0, 8), {}};
  size_t pos = 8;
  while (pos < b.size()) {
    const size_t begin = pos;
    const uint32_t len = u32(b, pos);
    const std::string name = b.substr(pos + 4, len);
    pos += 4 + len;
    const uint32_t rank = u32(b, pos);
    pos += 4;
    size_t count = 1;
    for (uint32_t r = 0; r < rank; ++r, pos += 4) count *= u32(b, pos);
    pos += 8 * count;
    out.tensors.emplace_back(name, b.substr(begin, pos - begin));
  }
  return out;
}

ModelConfig small() {
  ModelConfig c;
  c.encoder.dim = 8;
  c.encoder.dim_in = 6;
  c.encoder.hash_buckets = 32;
  c.layers = 2;
  c.heads = 2;
  return c;
}

}  // namespace

TEST_CASE("round trip is bit-identical") {
  ModelParams p = ModelParams::init(small(), 3);
  const std::string bytes = serialize_checkpoint(p);
  CHECK(bytes.substr(0, 4) == "GIMC");
  CHECK(u32(bytes, 4) == kCheckpointVersion);
  ModelParams q = deserialize_checkpoint(bytes);
  CHECK(q.config.layers == 2);
  CHECK(q.config.heads == 2);
  CHECK(q.config.encoder.dim_in == 6);
  CHECK(q.config.encoder.hash_buckets == 32);
  auto a = p.tensors(), b = q.tensors();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(*a[i].value == *b[i].value);
  }
  CHECK(serialize_checkpoint(q) == bytes);

  const auto path = std::filesystem::temp_directory_path() / "gimc_checkpoint_test.bin";
  save_checkpoint(p, path);
  ModelParams loaded = load_checkpoint(path);
  CHECK(serialize_checkpoint(loaded) == bytes);
  std::filesystem::remove(path);
}

TEST_CASE("layout") {
  ModelParams p = ModelParams::init(small(), 3);
  const Blobs b = split(serialize_checkpoint(p));
  REQUIRE(!b.tensors.empty());
  CHECK(b.tensors.front().first == "meta.config");
  CHECK(b.tensors.size() == p.tensors().size() + 1);
  CHECK(b.join() == serialize_checkpoint(p));
}

TEST_CASE("damaged checkpoints") {
  ModelParams p = ModelParams::init(small(), 3);
  const std::string bytes = serialize_checkpoint(p);
  SUBCASE("bad magic") {
    std::string x = bytes;
    x[0] = 'X';
    CHECK_THROWS_AS(deserialize_checkpoint(x), DataError);
  }
  SUBCASE("unknown version") {
    std::string x = bytes;
    x[4] = 9;
    CHECK_THROWS_AS(deserialize_checkpoint(x), DataError);
  }
  SUBCASE("truncated") {
    CHECK_THROWS_AS(deserialize_checkpoint(bytes.substr(0, bytes.size() - 3)), DataError);
  }
  SUBCASE("missing tensor") {
    Blobs b = split(bytes);
    const std::string name = b.tensors[3].first;
    b.tensors.erase(b.tensors.begin() + 3);
    try {
      deserialize_checkpoint(b.join());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(name) != std::string::npos);
    }
  }
  SUBCASE("extra tensor") {
    ModelConfig big = small();
    big.layers = 3;
    ModelParams q = ModelParams::init(big, 3);
    Blobs extra = split(serialize_checkpoint(q));
    Blobs b = split(bytes);
    for (const auto& t : extra.tensors) {
      if (t.first.rfind("gat.2.", 0) == 0) b.tensors.push_back(t);
    }
    CHECK_THROWS_AS(deserialize_checkpoint(b.join()), DataError);
  }
  SUBCASE("duplicate tensor") {
    Blobs b = split(bytes);
    b.tensors.push_back(b.tensors.back());
    CHECK_THROWS_AS(deserialize_checkpoint(b.join()), DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/gimc.bin"), DataError);
  }
}
