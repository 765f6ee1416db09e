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

#ifndef GIMC_CHECKPOINT_H_
#define GIMC_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "gimc/model.h"

namespace gimc {

inline constexpr uint32_t kCheckpointVersion = 1;

// "GIMC", u32 version, then named tensors until end of file: u32 name
// length, name bytes, u32 rank, rank x u32 dims, row-major float64 values;
// all little-endian. The first tensor, "meta.config", records the model
// configuration.
void save_checkpoint(ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

std::string serialize_checkpoint(ModelParams& params);
ModelParams deserialize_checkpoint(const std::string& bytes);

}  // namespace gimc

#endif  // GIMC_CHECKPOINT_H_
