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

#include <utility>
#include <vector>

#include "dedt/nn.hpp"
#include "dedt/trajectory.hpp"

namespace dedt {

/// Causal-transformer policy over (return-to-go, state, action) tokens.
/// A learned environment-tag embedding is prepended as one extra token;
/// learned timestep encodings are added to all three tokens of a timestep.
/// The linear action head reads each state-token output; deployed actions
/// are normalized to unit-norm (cos, sin) pairs.
struct DtConfig {
    int elements = 16;   ///< N
    int antennas = 2;    ///< M
    int blocks = 3;
    int width = 64;
    int heads = 4;
    double dropout = 0.1;
    int context_window = 10;
    int max_timesteps = 64;
    int env_tags = 8;    ///< tag vocabulary; tag 0 is the generic/unknown tag
    int ffn_mult = 4;

    int state_dim() const { return 2 * elements * antennas; }
    int action_dim() const { return 2 * elements; }
};

/// A trajectory slice ready for the model. Timesteps are absolute; the
/// action of the final timestep may be absent (that is the slot to fill at
/// inference time).
struct TokenWindow {
    std::vector<int> timesteps;
    std::vector<double> rtg;
    std::vector<Vec> states;
    std::vector<Vec> actions;
    bool last_action_present = true;
    int env_tag = 0;

    int length() const { return static_cast<int>(timesteps.size()); }
    /// Interleaved token count, excluding the prepended tag token.
    int token_count() const { return 3 * length() - (last_action_present ? 0 : 1); }
};

/// Inference-form window over the last `window` timesteps of a prefix: the
/// current timestep's action slot is absent.
TokenWindow encode_tokens(const Trajectory& traj, int prefix_len, int window,
                          int env_tag = 0);

class DtModel {
  public:
    DtConfig cfg;
    nn::ParamStore params;
    double rtg_scale = 1.0;    ///< conditioning scale, fixed at first training
    double state_scale = 1.0;  ///< state input scale, fixed at first training

    explicit DtModel(const DtConfig& c, uint64_t init_seed = 0xD7);
    DtModel() = default;

    struct ForwardOut {
        int pred_node = -1;                         ///< (rows x 2N) raw head output
        std::vector<std::pair<int, int>> rows;      ///< (sample, window position)
    };
    /// predict_all: one prediction per state token; otherwise only the
    /// final state token of each window.
    ForwardOut forward_on_graph(nn::Graph& g, const std::vector<TokenWindow>& batch,
                                bool predict_all) const;

    /// Evaluation-mode action for the window's final state token, as
    /// unit-norm (cos, sin) pairs.
    Vec predict_action(const TokenWindow& window);

    /// Raw head outputs for every state token of one window (eval mode).
    Mat predict_all_raw(const TokenWindow& window);

  private:
    void touch_params();
    uint64_t init_seed_ = 0xD7;
};

/// Per-pair unit normalization of a raw 2N action vector.
Vec normalize_action_pairs(const Vec& raw);

struct DtTrainConfig {
    int iters = 2000;
    int batch = 32;
    double lr = 1e-4;
    double grad_clip = 1.0;
    double weight_decay = 1e-4;
    bool final_only = false;  ///< supervise only the final window position
    int log_every = 200;
};

/// Supervised action regression on expert windows; returns per-iteration
/// losses. Sets the model's input scales from the buffer on first call.
std::vector<double> dt_train(DtModel& model, const ReplayBuffer& buffer,
                             const DtTrainConfig& cfg, Rng& rng);

/// Head-only adaptation: every parameter except the action head is frozen.
/// Returns the per-step losses (empty when steps == 0).
std::vector<double> fine_tune(DtModel& model, const ReplayBuffer& fewshot, int steps,
                              double lr, Rng& rng);

}  // namespace dedt
