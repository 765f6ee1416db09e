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

#include "gimc/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace gimc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::string& out, T v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  template <typename T>
  T get() {
    T v;
    need(sizeof v);
    std::memcpy(&v, bytes_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }

  std::string str(size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(size_t n) const {
    if (pos_ + n > bytes_.size()) throw DataError("checkpoint truncated");
  }

  const std::string& bytes_;
  size_t pos_ = 0;
};

void put_tensor(std::string& out, const std::string& name, const Mat& m, bool vector) {
  put<uint32_t>(out, static_cast<uint32_t>(name.size()));
  out += name;
  if (vector) {
    put<uint32_t>(out, 1);
    put<uint32_t>(out, static_cast<uint32_t>(m.size()));
  } else {
    put<uint32_t>(out, 2);
    put<uint32_t>(out, static_cast<uint32_t>(m.rows()));
    put<uint32_t>(out, static_cast<uint32_t>(m.cols()));
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put<double>(out, m(i, j));
  }
}

}  // namespace

std::string serialize_checkpoint(ModelParams& params) {
  const ModelConfig& c = params.config;
  Mat meta(8, 1);
  meta << (c.encoder.mode == EncoderMode::kToy ? 0.0 : 1.0), c.encoder.dim_in, c.encoder.dim,
      c.encoder.hash_buckets, c.layers, c.heads, c.leaky_slope, c.pregraph_statement ? 1.0 : 0.0;
  std::string out = "GIMC";
  put<uint32_t>(out, kCheckpointVersion);
  put_tensor(out, "meta.config", meta, true);
  for (const NamedTensor& t : params.tensors()) put_tensor(out, t.name, *t.value, false);
  return out;
}

ModelParams deserialize_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.str(4) != "GIMC") throw DataError("checkpoint: bad magic, expected GIMC");
  const auto version = in.get<uint32_t>();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  std::map<std::string, Mat> tensors;
  while (!in.done()) {
    const std::string name = in.str(in.get<uint32_t>());
    const auto rank = in.get<uint32_t>();
    if (rank < 1 || rank > 2) throw DataError("checkpoint: tensor " + name + " has rank " +
                                              std::to_string(rank));
    const auto rows = in.get<uint32_t>();
    const uint32_t cols = rank == 2 ? in.get<uint32_t>() : 1;
    Mat m(rows, cols);
    for (uint32_t i = 0; i < rows; ++i) {
      for (uint32_t j = 0; j < cols; ++j) m(i, j) = in.get<double>();
    }
    if (!tensors.emplace(name, std::move(m)).second) {
      throw DataError("checkpoint: duplicate tensor " + name);
    }
  }
  auto meta_it = tensors.find("meta.config");
  if (meta_it == tensors.end() || meta_it->second.size() != 8) {
    throw DataError("checkpoint: missing meta.config");
  }
  const Mat& meta = meta_it->second;
  ModelConfig c;
  c.encoder.mode = meta(0) == 0.0 ? EncoderMode::kToy : EncoderMode::kCache;
  c.encoder.dim_in = static_cast<int>(meta(1));
  c.encoder.dim = static_cast<int>(meta(2));
  c.encoder.hash_buckets = static_cast<int>(meta(3));
  c.layers = static_cast<int>(meta(4));
  c.heads = static_cast<int>(meta(5));
  c.leaky_slope = meta(6);
  c.pregraph_statement = meta(7) != 0.0;

  ModelParams params = ModelParams::init(c, 0);
  for (const NamedTensor& t : params.tensors()) {
    auto it = tensors.find(t.name);
    if (it == tensors.end()) throw DataError("checkpoint: missing tensor " + t.name);
    if (it->second.rows() != t.value->rows() || it->second.cols() != t.value->cols()) {
      throw DataError("checkpoint: tensor " + t.name + " has the wrong shape");
    }
    *t.value = it->second;
    tensors.erase(it);
  }
  tensors.erase("meta.config");
  if (!tensors.empty()) {
    throw DataError("checkpoint: unexpected tensor " + tensors.begin()->first);
  }
  return params;
}

void save_checkpoint(ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  const std::string bytes = serialize_checkpoint(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

}  // namespace gimc
