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

#ifndef GIMC_GRADCHECK_H_
#define GIMC_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gimc/contrastive.h"
#include "gimc/corpus.h"
#include "gimc/model.h"

namespace gimc {

// Per-tensor error: max_i |analytic_i - numeric_i| divided by the larger of
// the two tensors' max-abs entries (floored at 1e-8), numeric gradients from
// central differences.
struct GradcheckReport {
  std::vector<std::pair<std::string, double>> errors;

  double max_error() const;
};

// max|a - n| / max(max|a|, max|n|, floor).
double tensor_relative_error(const Mat& analytic, const Mat& numeric, double floor = 1e-8);

// Denominator floor for a loss of value `loss`: central differences carry
// round-off of order 1e-12 * |loss| / eps, so tensors whose whole gradient
// sits below this are compared against it instead of against themselves.
double gradcheck_floor(double loss);

// Central-difference gradient of `loss` with respect to every entry of `x`.
Mat numeric_gradient(Mat& x, const std::function<double()>& loss, double eps = 1e-4);

// As above, but an entry whose +eps and -eps evaluations disagree on
// `kinks` (a sign pattern of every piecewise-linear pre-activation) is
// re-differenced with a step shrunk by 10x, down to 1e-8.
Mat numeric_gradient(Mat& x, const std::function<double()>& loss,
                     const std::function<std::vector<bool>()>& kinks, double eps = 1e-4);

// Signs of every LeakyReLU pre-activation of `stack` on (adj, features).
std::vector<bool> leaky_signature(const Adjacency& adj, const Mat& features,
                                  const GatStack& stack);

// 3-layer GATv2 stack on a random connected graph with `nodes` nodes and a
// random linear read-out; checks every layer tensor and the input features.
GradcheckReport gradcheck_gat(uint64_t seed, int nodes, int dim = 8, int heads = 4,
                              int layers = 3);

// Whole model (all four losses) on the two-sentence helicopter fixture.
GradcheckReport gradcheck_model(uint64_t seed, const ModelConfig& config);

ModelConfig gradcheck_model_config();

// Two sentences: "two French military helicopters crashed because engines
// failed yesterday ." (causal crashed/failed) and "soldiers died and
// civilians fled the city ." (non-causal died/fled).
Document helicopter_fixture();
DictionaryList helicopter_dictionaries();

}  // namespace gimc

#endif  // GIMC_GRADCHECK_H_
