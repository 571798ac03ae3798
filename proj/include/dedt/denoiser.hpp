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

#pragma once

#include <vector>

#include "dedt/csi.hpp"
#include "dedt/nn.hpp"

namespace dedt {

/// Conditional noise-prediction network. One token per RIS element; the
/// noisy full sequence carries [x_k token | mirrored noisy observation |
/// observed flag] per element, the condition sequence carries one token per
/// observed element with a positional embedding keyed by element index (so
/// conditioning is order-invariant). A cross-attention block lets the full
/// sequence attend to the observations, a self-attention stack mixes the
/// element tokens, and a kernel-3 convolution + residual + linear head
/// emits the per-element noise prediction.
struct DenoiserConfig {
    int elements = 16;   ///< N
    int antennas = 2;    ///< M
    int width = 64;
    int heads = 4;
    int self_blocks = 2;
    int ffn_mult = 2;

    int token_dim() const { return 2 * antennas; }
    int input_dim() const { return 4 * antennas + 1; }
};

/// One sample of the batched forward pass, in normalized units.
struct DenoiserInput {
    Mat x_tokens;             ///< N x 2M tokens of the noisy vector x_k
    const Condition* cond;    ///< normalized condition
    int k = 1;                ///< diffusion step
};

class DenoiserModel {
  public:
    DenoiserConfig cfg;
    nn::ParamStore params;
    double norm_scale = 1.0;   ///< global RMS scale of training data (raw units)
    double entry_var = 1.0;    ///< per-complex-entry signal variance (raw units)

    explicit DenoiserModel(const DenoiserConfig& c, uint64_t init_seed = 0x1234);
    DenoiserModel() = default;

    /// Builds the forward pass on an existing graph; returns the node id of
    /// the stacked (B*N) x 2M predicted-noise tokens.
    int forward_on_graph(nn::Graph& g, const std::vector<DenoiserInput>& batch) const;

    /// Evaluation-mode prediction: stacked (B*N) x 2M noise tokens.
    Mat predict_noise_tokens(const std::vector<DenoiserInput>& batch);

  private:
    void touch_params();  ///< materialize all parameters once, deterministically
    uint64_t init_seed_ = 0x1234;
};

}  // namespace dedt
