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


#include <cmath>

#include "doctest.h"
#include "fixtures.h"
#include "gimc/gatv2.h"
#include "gimc/gradcheck.h"

using namespace gimc;

namespace {

GatHead scalar_head(double wl, double wr, double a) {
  return {Mat::Constant(1, 1, wl), Mat::Constant(1, 1, wr), Mat::Constant(1, 1, a)};
}

Mat random_mat(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 2.0 * uniform_unit(rng) - 1.0;
  return m;
}

// Random undirected graph with self-loops first.
Adjacency random_graph(Rng& rng, int n, double p) {
  std::vector<std::set<int>> s(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (uniform_unit(rng) < p) {
        s[static_cast<size_t>(a)].insert(b);
        s[static_cast<size_t>(b)].insert(a);
      }
    }
  }
  Adjacency adj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    adj[static_cast<size_t>(i)].push_back(i);
    adj[static_cast<size_t>(i)].insert(adj[static_cast<size_t>(i)].end(), s[static_cast<size_t>(i)].begin(),
                                       s[static_cast<size_t>(i)].end());
  }
  return adj;
}

// Straight-line reference for one layer: loops over nodes, heads and
// neighbors with no shared helpers.
Mat reference_layer(const Adjacency& adj, const Mat& h, const GatLayer& layer) {
  const int n = static_cast<int>(h.rows());
  const int heads = static_cast<int>(layer.heads.size());
  const int dp = layer.head_dim();
  Mat concat = Mat::Zero(n, heads * dp);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < heads; ++k) {
      const GatHead& hd = layer.heads[static_cast<size_t>(k)];
      std::vector<double> e;
      for (int j : adj[static_cast<size_t>(i)]) {
        double s = 0.0;
        for (int t = 0; t < dp; ++t) {
          double m = 0.0;
          for (int c = 0; c < h.cols(); ++c) m += hd.w_left(t, c) * h(i, c) + hd.w_right(t, c) * h(j, c);
          s += hd.attn(t, 0) * (m > 0 ? m : layer.leaky_slope * m);
        }
        e.push_back(s);
      }
      double z = 0.0;
      for (double v : e) z += std::exp(v);
      for (size_t q = 0; q < e.size(); ++q) {
        const int j = adj[static_cast<size_t>(i)][q];
        for (int t = 0; t < dp; ++t) {
          double m = 0.0;
          for (int c = 0; c < h.cols(); ++c) m += hd.w_right(t, c) * h(j, c);
          concat(i, k * dp + t) += std::exp(e[q]) / z * m;
        }
      }
    }
  }
  return concat * layer.w_out.transpose();
}

}  // namespace

TEST_CASE("score") {
  SUBCASE("zero attention vector") {
    Rng rng(1);
    GatHead h{random_mat(2, 3, rng), random_mat(2, 3, rng), Mat::Zero(2, 1)};
    CHECK(score(random_mat(3, 1, rng), random_mat(3, 1, rng), h, 0.2) == 0.0);
  }
  SUBCASE("scalar hand arithmetic") {
    CHECK(score(Vec::Constant(1, 2.0), Vec::Constant(1, -5.0), scalar_head(1, 1, 1), 0.2) ==
          doctest::Approx(-0.6).epsilon(1e-12));
  }
  SUBCASE("asymmetric under swap when W_l differs from W_r") {
    const GatHead h = scalar_head(1.0, 3.0, 1.0);
    CHECK(score(Vec::Constant(1, 1.0), Vec::Constant(1, 2.0), h, 0.2) !=
          score(Vec::Constant(1, 2.0), Vec::Constant(1, 1.0), h, 0.2));
  }
}

TEST_CASE("attention weights") {
  SUBCASE("single neighbor") {
    Rng rng(2);
    GatHead h{random_mat(2, 3, rng), random_mat(2, 3, rng), random_mat(2, 1, rng)};
    const auto a = attention(0, {0}, random_mat(1, 3, rng), h, 0.2);
    CHECK(a == std::vector<double>{1.0});
  }
  SUBCASE("identical neighbors split evenly") {
    Rng rng(3);
    GatHead h{random_mat(2, 3, rng), random_mat(2, 3, rng), random_mat(2, 1, rng)};
    Mat f = random_mat(3, 3, rng);
    f.row(2) = f.row(1);
    const auto a = attention(0, {1, 2}, f, h, 0.2);
    CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("closed-form softmax") {
    Mat f(3, 1);
    f << 0.0, std::log(2.0), std::log(4.0);
    const auto a = attention(0, {0, 1, 2}, f, scalar_head(0.0, 1.0, 1.0), 0.2);
    CHECK(a[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(a[2] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  }
}

TEST_CASE("layer forward") {
  Rng rng(4);
  SUBCASE("isolated node uses its own transformed features") {
    GatLayer layer = GatLayer::init(4, 2, rng);
    const Mat h = random_mat(1, 4, rng);
    const Mat out = layer_forward({{0}}, h, layer);
    Vec cat(4);
    cat << layer.heads[0].w_right * h.row(0).transpose(), layer.heads[1].w_right * h.row(0).transpose();
    CHECK((out.row(0).transpose() - layer.w_out * cat).norm() < 1e-14);
  }
  SUBCASE("one head, identity output, equal neighbor") {
    GatLayer layer = GatLayer::init(3, 1, rng);
    layer.w_out = Mat::Identity(3, 3);
    Mat h = random_mat(2, 3, rng);
    h.row(1) = h.row(0);
    const Mat out = layer_forward({{0, 1}, {1, 0}}, h, layer);
    CHECK((out.row(0).transpose() - layer.heads[0].w_right * h.row(0).transpose()).norm() < 1e-14);
  }
  SUBCASE("three-node path matches the straight-line reference") {
    const GatLayer layer = GatLayer::init(2, 2, rng);
    const Adjacency path = {{0, 1}, {1, 0, 2}, {2, 1}};
    const Mat h = random_mat(3, 2, rng);
    CHECK((layer_forward(path, h, layer) - reference_layer(path, h, layer)).norm() < 1e-13);
  }
  SUBCASE("stack of one equals the layer; stack of three composes") {
    const Adjacency adj = random_graph(rng, 8, 0.3);
    const Mat h = random_mat(8, 8, rng);
    GatStack stack = GatStack::init(8, 3, 4, rng);
    Mat expect = h;
    for (const GatLayer& l : stack.layers) expect = reference_layer(adj, expect, l);
    CHECK((stack_forward(adj, h, stack).output - expect).norm() < 1e-12);
    GatStack one;
    one.layers = {stack.layers[0]};
    CHECK(stack_forward(adj, h, one).output == layer_forward(adj, h, stack.layers[0]));
  }
  SUBCASE("zero parameters give zero features") {
    GatStack stack = GatStack::zeros_like(GatStack::init(8, 3, 4, rng));
    const Adjacency adj = random_graph(rng, 5, 0.5);
    CHECK(stack_forward(adj, random_mat(5, 8, rng), stack).output.isZero(0.0));
  }
  SUBCASE("width not divisible by heads is rejected") {
    CHECK_THROWS_AS(GatLayer::init(6, 4, rng), UsageError);
  }
}

TEST_CASE("attention rows sum to one on random graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 29));
    const Adjacency adj = random_graph(rng, n, uniform_unit(rng));
    const GatStack stack = GatStack::init(8, 3, 4, rng);
    const StackTrace trace = stack_forward(adj, random_mat(n, 8, rng), stack);
    for (const LayerTrace& lt : trace.layers) {
      for (const auto& head : lt.alpha) {
        for (const auto& row : head) {
          double s = 0.0;
          for (double a : row) s += a;
          CHECK(std::abs(s - 1.0) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("permutation equivariance") {
  Rng rng(6);
  const int n = 9;
  const Adjacency adj = random_graph(rng, n, 0.35);
  const Mat h = random_mat(n, 8, rng);
  const GatStack stack = GatStack::init(8, 3, 4, rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Node i becomes perm[i].
  Adjacency padj(n);
  Mat ph(n, 8);
  for (int i = 0; i < n; ++i) {
    ph.row(perm[static_cast<size_t>(i)]) = h.row(i);
    auto& row = padj[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    for (int j : adj[static_cast<size_t>(i)]) row.push_back(perm[static_cast<size_t>(j)]);
  }
  const Mat out = stack_forward(adj, h, stack).output;
  const Mat pout = stack_forward(padj, ph, stack).output;
  for (int i = 0; i < n; ++i) CHECK((pout.row(perm[static_cast<size_t>(i)]) - out.row(i)).norm() < 1e-12);
}

TEST_CASE("an edge in one component leaves the other untouched") {
  Rng rng(7);
  const Adjacency a = {{0, 1}, {1, 0}, {2}, {3}, {4}};
  const Adjacency b = {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {4}};
  const Mat h = random_mat(5, 8, rng);
  const GatStack stack = GatStack::init(8, 3, 4, rng);
  const Mat oa = stack_forward(a, h, stack).output;
  const Mat ob = stack_forward(b, h, stack).output;
  CHECK(oa.topRows(2) == ob.topRows(2));
  CHECK(oa.row(4) == ob.row(4));
  CHECK((oa.row(2) - ob.row(2)).norm() > 0);
}

TEST_CASE("backward") {
  Rng rng(8);
  SUBCASE("zero upstream gives zero gradients") {
    const Adjacency adj = random_graph(rng, 6, 0.5);
    const GatStack stack = GatStack::init(8, 3, 4, rng);
    const StackTrace tr = stack_forward(adj, random_mat(6, 8, rng), stack);
    GatStack g = GatStack::zeros_like(stack);
    const Mat gin = stack_backward(adj, stack, tr, Mat::Zero(6, 8), g);
    CHECK(gin.isZero(0.0));
    for (const GatLayer& l : g.layers) {
      CHECK(l.w_out.isZero(0.0));
      for (const GatHead& h : l.heads) CHECK((h.w_left.isZero(0.0) && h.w_right.isZero(0.0) && h.attn.isZero(0.0)));
    }
  }
  SUBCASE("scalar two-node case") {
    GatLayer layer;
    layer.heads = {scalar_head(0.7, -1.3, 0.9)};
    layer.w_out = Mat::Constant(1, 1, 1.1);
    const Adjacency adj = {{0, 1}, {1, 0}};
    Mat h(2, 1);
    h << 0.4, -0.8;
    Mat out;
    const LayerTrace tr = layer_forward_traced(adj, h, layer, out);
    Mat up(2, 1);
    up << 1.0, -2.0;
    GatLayer g = GatLayer::zeros_like(layer);
    const Mat gin = layer_backward(adj, layer, tr, up, g);
    const auto loss = [&] { return (layer_forward(adj, h, layer).array() * up.array()).sum(); };
    CHECK(tensor_relative_error(g.heads[0].w_left, numeric_gradient(layer.heads[0].w_left, loss)) < 1e-6);
    CHECK(tensor_relative_error(g.heads[0].w_right, numeric_gradient(layer.heads[0].w_right, loss)) < 1e-6);
    CHECK(tensor_relative_error(g.heads[0].attn, numeric_gradient(layer.heads[0].attn, loss)) < 1e-6);
    CHECK(tensor_relative_error(g.w_out, numeric_gradient(layer.w_out, loss)) < 1e-6);
    CHECK(tensor_relative_error(gin, numeric_gradient(h, loss)) < 1e-6);
  }
  SUBCASE("full stack on a 30-node graph") {
    CHECK(gradcheck_gat(21, 30).max_error() < 1e-4);
  }
  SUBCASE("trace from another stack is rejected") {
    const Adjacency adj = random_graph(rng, 4, 0.5);
    const GatStack stack = GatStack::init(8, 3, 4, rng);
    const GatStack two = GatStack::init(8, 2, 4, rng);
    const StackTrace tr = stack_forward(adj, random_mat(4, 8, rng), two);
    GatStack g = GatStack::zeros_like(stack);
    CHECK_THROWS_AS(stack_backward(adj, stack, tr, Mat::Zero(4, 8), g), std::logic_error);
  }
}
