// SPDX-License-Identifier: Apache-2.0
//
// dedt — diffusion-enhanced decision-transformer workbench for RIS beamforming
// Copyright (C) 2026 the dedt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Minimal reverse-mode autodiff over Eigen matrices. Networks in this
// project are small (a few hundred thousand parameters) and run on CPU;
// a tape of matrix-valued nodes keeps the implementations readable and
// lets every layer be checked against finite differences.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dedt/common.hpp"
#include "dedt/rng.hpp"

namespace dedt::nn {

class Tape {
  public:
    /// New leaf node. Parameters are leaves with needs_grad = true.
    int leaf(Mat value, bool needs_grad = false);

    const Mat& val(int id) const { return nodes_[id].val; }
    Mat& grad(int id);
    bool needs_grad(int id) const { return nodes_[id].needs_grad; }

    int matmul(int a, int b);
    int add(int a, int b);
    int sub(int a, int b);
    int add_rowvec(int a, int row);  ///< broadcast a 1 x F row over all rows
    int scale(int a, double s);
    int hadamard(int a, int b);
    int mul_mask(int a, Mat mask);  ///< elementwise by a constant (dropout etc.)
    int gelu(int a);
    int tanh_op(int a);
    int exp_op(int a);
    int rowsum(int a);  ///< R x F -> R x 1
    int gather_rows(int a, std::vector<int> idx);
    int concat_rows(int a, int b);
    /// Shift rows by `offset` inside each consecutive block of `block` rows,
    /// zero-filling at block edges (1-d convolutions over token axes).
    int shift_blocks(int a, int offset, int block);
    int layer_norm(int x, int gain, int bias);
    /// Scaled-dot-product multi-head attention over per-sample segments.
    /// q is (sum q_lens) x D, k and v are (sum k_lens) x D. A zero-length
    /// key segment yields zero output rows for that sample. causal requires
    /// q_lens == k_lens per sample.
    int attention(int q, int k, int v, int heads, std::vector<int> q_lens,
                  std::vector<int> k_lens, bool causal);
    int minimum(int a, int b);
    int clamp_op(int a, double lo, double hi);
    int mul_rowvec(int a, int row);  ///< broadcast-multiply a 1 x F row over all rows
    int add_scalar_node(int a, int s);  ///< add a 1x1 node's value to every entry
    /// 1x1 node: w * sum((a - target)^2).
    int sq_error(int a, Mat target, double w);
    /// 1x1 node: sum(a .* w).
    int weighted_sum(int a, Mat w);

    void backward(int loss_id);

  private:
    struct Node {
        Mat val;
        Mat grad;
        bool needs_grad = false;
        std::function<void()> back;
    };
    std::vector<Node> nodes_;

    int push(Mat value, bool needs_grad, std::function<void()> back);
};

/// One trainable array with AdamW moments.
struct Param {
    Mat value;
    Mat m;
    Mat v;
};

/// Named parameter arrays; std::map keeps iteration (and therefore
/// checkpoints and training) deterministic.
class ParamStore {
  public:
    /// Create (or fetch) a parameter. init_std > 0 draws N(0, init_std^2)
    /// entries; init_std == 0 zero-fills; init_const fills a constant.
    Mat& create(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                double init_std, Rng& rng);
    Mat& create_const(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                      double fill);
    bool has(const std::string& name) const { return params_.count(name) > 0; }
    Param& at(const std::string& name);
    const Param& at(const std::string& name) const;

    std::map<std::string, Param>& all() { return params_; }
    const std::map<std::string, Param>& all() const { return params_; }
    int64_t step_count = 0;

  private:
    std::map<std::string, Param> params_;
};

/// Decoupled-weight-decay Adam with optional global-norm gradient clipping.
struct AdamW {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    double grad_clip = 0.0;  ///< 0 disables clipping

    /// Applies one update; `frozen` names are skipped entirely.
    void step(ParamStore& store, const std::map<std::string, Mat>& grads,
              const std::vector<std::string>& frozen = {}) const;
};

/// One forward pass: binds parameters from a store into tape leaves.
class Graph {
  public:
    Graph(ParamStore& store, bool train = false, Rng* rng = nullptr)
        : store_(&store), train_(train), rng_(rng) {}

    Tape tape;

    /// Bind a parameter (creating it on first use with the given shape/init).
    int P(const std::string& name, Eigen::Index rows, Eigen::Index cols,
          double init_std, double init_const = 0.0);
    int C(Mat constant) { return tape.leaf(std::move(constant), false); }

    bool training() const { return train_; }
    int dropout(int x, double p);

    /// Gradients of all bound parameters after tape.backward().
    std::map<std::string, Mat> grads();

    Rng& rng() { return *rng_; }

  private:
    ParamStore* store_;
    std::map<std::string, int> bound_;
    bool train_;
    Rng* rng_;

    Rng& init_rng();
    std::unique_ptr<Rng> fallback_rng_;
};

// ---- layer helpers -------------------------------------------------------

int linear(Graph& g, int x, const std::string& prefix, int in_dim, int out_dim,
           double init_std = 0.02);
int layer_norm(Graph& g, int x, const std::string& prefix, int dim);
/// Pre-norm residual self-attention + feed-forward block.
int transformer_block(Graph& g, int x, const std::string& prefix, int dim, int heads,
                      const std::vector<int>& lens, bool causal, double dropout_p,
                      int ffn_mult = 4);
/// Pre-norm residual cross-attention + feed-forward block (queries x, keys kv).
int cross_attention_block(Graph& g, int x, int kv, const std::string& prefix, int dim,
                          int heads, const std::vector<int>& q_lens,
                          const std::vector<int>& k_lens, double dropout_p,
                          int ffn_mult = 4);

/// Sinusoidal position/step features: one row per value, dim columns.
Mat sinusoidal_embedding(const std::vector<double>& values, int dim);

/// Global L2 norm over a gradient map.
double global_grad_norm(const std::map<std::string, Mat>& grads);

}  // namespace dedt::nn
