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

#include "gimc/gatv2.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gimc {

namespace {

void fill_uniform(Mat& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = (2.0 * uniform_unit(rng) - 1.0) * bound;
  }
}

}  // namespace

GatLayer GatLayer::init(int dim, int num_heads, Rng& rng, double leaky_slope) {
  if (num_heads < 1 || dim % num_heads != 0) {
    throw UsageError("model width " + std::to_string(dim) +
                     " is not divisible by head count " + std::to_string(num_heads));
  }
  const int head_dim = dim / num_heads;
  GatLayer layer;
  layer.leaky_slope = leaky_slope;
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < num_heads; ++k) {
    GatHead h{Mat(head_dim, dim), Mat(head_dim, dim), Mat(head_dim, 1)};
    fill_uniform(h.w_left, in_bound, rng);
    fill_uniform(h.w_right, in_bound, rng);
    fill_uniform(h.attn, 1.0 / std::sqrt(static_cast<double>(head_dim)), rng);
    layer.heads.push_back(std::move(h));
  }
  layer.w_out.resize(dim, num_heads * head_dim);
  fill_uniform(layer.w_out, 1.0 / std::sqrt(static_cast<double>(num_heads * head_dim)), rng);
  return layer;
}

GatLayer GatLayer::zeros_like(const GatLayer& other) {
  GatLayer z;
  z.leaky_slope = other.leaky_slope;
  for (const GatHead& h : other.heads) {
    z.heads.push_back({Mat::Zero(h.w_left.rows(), h.w_left.cols()),
                       Mat::Zero(h.w_right.rows(), h.w_right.cols()),
                       Mat::Zero(h.attn.rows(), h.attn.cols())});
  }
  z.w_out = Mat::Zero(other.w_out.rows(), other.w_out.cols());
  return z;
}

GatStack GatStack::init(int dim, int num_layers, int num_heads, Rng& rng) {
  GatStack s;
  for (int l = 0; l < num_layers; ++l) s.layers.push_back(GatLayer::init(dim, num_heads, rng));
  return s;
}

GatStack GatStack::zeros_like(const GatStack& other) {
  GatStack z;
  for (const GatLayer& l : other.layers) z.layers.push_back(GatLayer::zeros_like(l));
  return z;
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }

double score(const Vec& h_i, const Vec& h_j, const GatHead& head, double slope) {
  const Vec m = head.w_left * h_i + head.w_right * h_j;
  double s = 0.0;
  for (Eigen::Index t = 0; t < m.size(); ++t) s += head.attn(t, 0) * leaky_relu(m(t), slope);
  return s;
}

namespace {

// Numerically stable softmax of `scores`.
std::vector<double> softmax(const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double z = 0.0;
  for (size_t t = 0; t < scores.size(); ++t) z += (out[t] = std::exp(scores[t] - top));
  for (double& v : out) v /= z;
  return out;
}

double row_score(const Mat& left, const Mat& right, int i, int j, const Mat& attn,
                 double slope) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < left.cols(); ++t) {
    s += attn(t, 0) * leaky_relu(left(i, t) + right(j, t), slope);
  }
  return s;
}

}  // namespace

std::vector<double> attention(int i, const std::vector<int>& neighbors, const Mat& features,
                              const GatHead& head, double slope) {
  if (neighbors.empty()) throw std::invalid_argument("attention over an empty neighborhood");
  std::vector<double> scores;
  const Vec h_i = features.row(i).transpose();
  for (int j : neighbors) scores.push_back(score(h_i, features.row(j).transpose(), head, slope));
  return softmax(scores);
}

LayerTrace layer_forward_traced(const Adjacency& adj, const Mat& features,
                                const GatLayer& layer, Mat& output) {
  const auto n = features.rows();
  const int hd = layer.head_dim();
  LayerTrace tr;
  tr.input = features;
  tr.concat = Mat::Zero(n, static_cast<Eigen::Index>(layer.heads.size()) * hd);
  for (size_t k = 0; k < layer.heads.size(); ++k) {
    const GatHead& head = layer.heads[k];
    Mat left = features * head.w_left.transpose();
    Mat right = features * head.w_right.transpose();
    std::vector<std::vector<double>> alpha(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& nb = adj[static_cast<size_t>(i)];
      std::vector<double> scores;
      scores.reserve(nb.size());
      for (int j : nb) {
        scores.push_back(row_score(left, right, static_cast<int>(i), j, head.attn,
                                   layer.leaky_slope));
      }
      alpha[static_cast<size_t>(i)] = softmax(scores);
      auto block = tr.concat.block(i, static_cast<Eigen::Index>(k) * hd, 1, hd);
      for (size_t t = 0; t < nb.size(); ++t) {
        block += alpha[static_cast<size_t>(i)][t] * right.row(nb[t]);
      }
    }
    tr.left.push_back(std::move(left));
    tr.right.push_back(std::move(right));
    tr.alpha.push_back(std::move(alpha));
  }
  output = tr.concat * layer.w_out.transpose();
  return tr;
}

Mat layer_forward(const Adjacency& adj, const Mat& features, const GatLayer& layer) {
  Mat out;
  layer_forward_traced(adj, features, layer, out);
  return out;
}

StackTrace stack_forward(const Adjacency& adj, const Mat& features, const GatStack& stack) {
  StackTrace tr;
  tr.output = features;
  for (const GatLayer& layer : stack.layers) {
    Mat next;
    tr.layers.push_back(layer_forward_traced(adj, tr.output, layer, next));
    tr.output = std::move(next);
  }
  return tr;
}

Mat layer_backward(const Adjacency& adj, const GatLayer& layer, const LayerTrace& trace,
                   const Mat& grad_output, GatLayer& grads) {
  if (trace.left.size() != layer.heads.size() || trace.concat.rows() != grad_output.rows()) {
    throw std::logic_error("layer_backward: forward trace does not match the layer");
  }
  const int hd = layer.head_dim();
  const double slope = layer.leaky_slope;
  grads.w_out.noalias() += grad_output.transpose() * trace.concat;
  const Mat grad_concat = grad_output * layer.w_out;
  Mat grad_input = Mat::Zero(trace.input.rows(), trace.input.cols());

  for (size_t k = 0; k < layer.heads.size(); ++k) {
    const GatHead& head = layer.heads[k];
    GatHead& g = grads.heads[k];
    const Mat& left = trace.left[k];
    const Mat& right = trace.right[k];
    Mat grad_left = Mat::Zero(left.rows(), left.cols());
    Mat grad_right = Mat::Zero(right.rows(), right.cols());
    for (Eigen::Index i = 0; i < left.rows(); ++i) {
      const auto& nb = adj[static_cast<size_t>(i)];
      const auto& a = trace.alpha[k][static_cast<size_t>(i)];
      const Eigen::RowVectorXd d_out =
          grad_concat.block(i, static_cast<Eigen::Index>(k) * hd, 1, hd);
      std::vector<double> d_alpha(nb.size());
      double weighted = 0.0;
      for (size_t t = 0; t < nb.size(); ++t) {
        d_alpha[t] = d_out.dot(right.row(nb[t]));
        weighted += a[t] * d_alpha[t];
        grad_right.row(nb[t]) += a[t] * d_out;
      }
      for (size_t t = 0; t < nb.size(); ++t) {
        const double d_score = a[t] * (d_alpha[t] - weighted);
        if (d_score == 0.0) continue;
        for (Eigen::Index c = 0; c < hd; ++c) {
          const double m = left(i, c) + right(nb[t], c);
          g.attn(c, 0) += d_score * leaky_relu(m, slope);
          const double d_m = d_score * head.attn(c, 0) * (m > 0.0 ? 1.0 : slope);
          grad_left(i, c) += d_m;
          grad_right(nb[t], c) += d_m;
        }
      }
    }
    g.w_left.noalias() += grad_left.transpose() * trace.input;
    g.w_right.noalias() += grad_right.transpose() * trace.input;
    grad_input.noalias() += grad_left * head.w_left + grad_right * head.w_right;
  }
  return grad_input;
}

Mat stack_backward(const Adjacency& adj, const GatStack& stack, const StackTrace& trace,
                   const Mat& grad_output, GatStack& grads) {
  if (trace.layers.size() != stack.layers.size()) {
    throw std::logic_error("stack_backward: missing forward intermediates");
  }
  Mat grad = grad_output;
  for (size_t l = stack.layers.size(); l-- > 0;) {
    grad = layer_backward(adj, stack.layers[l], trace.layers[l], grad, grads.layers[l]);
  }
  return grad;
}

}  // namespace gimc
