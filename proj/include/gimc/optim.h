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

#ifndef GIMC_OPTIM_H_
#define GIMC_OPTIM_H_

#include <cstdint>
#include <vector>

#include "gimc/common.h"
#include "gimc/model.h"

namespace gimc {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// Decoupled weight decay (Loshchilov & Hutter) with bias-corrected moments.
class AdamW {
 public:
  explicit AdamW(AdamWConfig config = {}) : config_(config) {}

  // `params` and `grads` must list tensors of identical shapes in the same
  // order on every call. Throws NumericError naming the first tensor with a
  // non-finite gradient; parameters are untouched in that case.
  void step(const std::vector<NamedTensor>& params, const std::vector<NamedTensor>& grads,
            double lr);

  int64_t steps() const { return step_; }

 private:
  AdamWConfig config_;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
  int64_t step_ = 0;
};

// lr0 * (1 - step / total_steps).
double lr_schedule(int64_t step, int64_t total_steps, double lr0);

// Rescales all gradients so their global L2 norm is at most `max_norm`.
// Returns the norm before clipping.
double clip_grad_norm(const std::vector<NamedTensor>& grads, double max_norm);

}  // namespace gimc

#endif  // GIMC_OPTIM_H_
