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

#include "gimc/optim.h"

#include <cmath>

namespace gimc {

void AdamW::step(const std::vector<NamedTensor>& params, const std::vector<NamedTensor>& grads,
                 double lr) {
  if (params.size() != grads.size()) throw std::logic_error("AdamW: params/grads mismatch");
  for (const NamedTensor& g : grads) {
    if (!g.value->allFinite()) throw NumericError("non-finite gradient in tensor " + g.name);
  }
  if (m_.empty()) {
    for (const NamedTensor& p : params) {
      m_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
      v_.push_back(Mat::Zero(p.value->rows(), p.value->cols()));
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (size_t i = 0; i < params.size(); ++i) {
    Mat& theta = *params[i].value;
    const Mat& g = *grads[i].value;
    if (theta.rows() != g.rows() || theta.cols() != g.cols()) {
      throw std::logic_error("AdamW: shape mismatch for " + params[i].name);
    }
    theta *= 1.0 - lr * config_.weight_decay;
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g.cwiseProduct(g);
    theta.array() -= lr * (m_[i].array() / bc1) /
                     ((v_[i].array() / bc2).sqrt() + config_.eps);
  }
}

double lr_schedule(int64_t step, int64_t total_steps, double lr0) {
  if (total_steps <= 0) throw UsageError("lr_schedule: total_steps must be positive");
  if (step < 0 || step > total_steps) throw UsageError("lr_schedule: step out of range");
  return lr0 * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

double clip_grad_norm(const std::vector<NamedTensor>& grads, double max_norm) {
  double sq = 0.0;
  for (const NamedTensor& g : grads) sq += g.value->squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    for (const NamedTensor& g : grads) *g.value *= max_norm / norm;
  }
  return norm;
}

}  // namespace gimc
