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

#include "dedt/beam_env.hpp"
#include "dedt/nn.hpp"

namespace dedt {

struct PpoConfig {
    int rollout_steps = 2048;
    int epochs = 4;          ///< optimization epochs per rollout
    int minibatch = 256;
    double clip_ratio = 0.2;
    double discount = 0.99;
    double gae_lambda = 0.95;
    double value_coef = 0.5;
    double entropy_coef = 0.0;
    double lr = 3e-4;
    int64_t total_env_steps = 60000;
    int hidden = 64;

    void validate() const {
        require(clip_ratio > 0.0 && clip_ratio < 1.0, "PpoConfig: clip ratio in (0,1)");
        require(discount > 0.0 && discount <= 1.0, "PpoConfig: discount in (0,1]");
        require(rollout_steps >= 4 && minibatch >= 1 && epochs >= 1,
                "PpoConfig: invalid sizes");
    }
};

/// Diagonal-Gaussian policy over the 2N pair representation with a tanh
/// MLP mean and a state-independent log-std; actions are normalized to
/// unit pairs before they reach the environment.
class PpoPolicy {
  public:
    nn::ParamStore params;
    int state_dim = 0;
    int action_dim = 0;
    int hidden = 64;
    double state_scale = 1.0;
    double reward_scale = 1.0;

    PpoPolicy() = default;
    PpoPolicy(int state_dim, int action_dim, int hidden, uint64_t init_seed);

    /// Mean-action phases for deterministic evaluation.
    Vec act_deterministic(const Vec& state);
    /// Policy mean on an existing graph; rows = stacked states / scale.
    int mean_on_graph(nn::Graph& g, const Mat& scaled_states) const;
    int value_on_graph(nn::Graph& g, const Mat& scaled_states) const;
};

struct PpoResult {
    PpoPolicy policy;
    std::vector<double> epoch_mean_rate;  ///< mean raw rate per rollout iteration
};

/// Clipped-surrogate PPO with GAE on a BeamEnv. Deterministic given the RNG.
PpoResult ppo_train(BeamEnv& env, const PpoConfig& cfg, Rng& rng);

/// Same, but stops after `budget_seconds` of wall-clock time (at least one
/// rollout/update cycle runs). Used for equal-budget comparisons.
PpoResult ppo_train_for_seconds(BeamEnv& env, const PpoConfig& cfg, double budget_seconds,
                                Rng& rng);

/// Mean episode rate of the deterministic policy over `episodes` episodes.
double evaluate_ppo_policy(PpoPolicy& policy, BeamEnv& env, int episodes);

}  // namespace dedt
