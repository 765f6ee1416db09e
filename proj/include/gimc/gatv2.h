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

#ifndef GIMC_GATV2_H_
#define GIMC_GATV2_H_

#include <vector>

#include "gimc/common.h"

namespace gimc {

// Neighbor lists; every node lists itself (self-loop).
using Adjacency = std::vector<std::vector<int>>;

struct GatHead {
  Mat w_left;   // d' x d, applied to the receiving node
  Mat w_right;  // d' x d, applied to the neighbor
  Mat attn;     // d' x 1
};

struct GatLayer {
  std::vector<GatHead> heads;
  Mat w_out;  // d x (K * d')
  double leaky_slope = 0.2;

  int head_dim() const { return static_cast<int>(heads.front().w_left.rows()); }

  static GatLayer init(int dim, int num_heads, Rng& rng, double leaky_slope = 0.2);
  static GatLayer zeros_like(const GatLayer& other);
};

struct GatStack {
  std::vector<GatLayer> layers;

  static GatStack init(int dim, int num_layers, int num_heads, Rng& rng);
  static GatStack zeros_like(const GatStack& other);
};

double leaky_relu(double x, double slope);

// a^T LeakyReLU(W_l h_i + W_r h_j).
double score(const Vec& h_i, const Vec& h_j, const GatHead& head, double slope);

// Softmax of scores of node i over `neighbors` (rows of `features`).
std::vector<double> attention(int i, const std::vector<int>& neighbors, const Mat& features,
                              const GatHead& head, double slope);

struct LayerTrace {
  Mat input;
  std::vector<Mat> left;   // per head, N x d'
  std::vector<Mat> right;  // per head, N x d'
  std::vector<std::vector<std::vector<double>>> alpha;  // [head][node][neighbor]
  Mat concat;  // N x (K * d')
};

struct StackTrace {
  std::vector<LayerTrace> layers;
  Mat output;
};

LayerTrace layer_forward_traced(const Adjacency& adj, const Mat& features,
                                const GatLayer& layer, Mat& output);
Mat layer_forward(const Adjacency& adj, const Mat& features, const GatLayer& layer);

// No nonlinearity between layers; each layer maps N x d to N x d.
StackTrace stack_forward(const Adjacency& adj, const Mat& features, const GatStack& stack);

// Accumulates parameter gradients into `grads` and returns dL/d(features).
Mat layer_backward(const Adjacency& adj, const GatLayer& layer, const LayerTrace& trace,
                   const Mat& grad_output, GatLayer& grads);
Mat stack_backward(const Adjacency& adj, const GatStack& stack, const StackTrace& trace,
                   const Mat& grad_output, GatStack& grads);

}  // namespace gimc

#endif  // GIMC_GATV2_H_
