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
#include "dedt/dt_model.hpp"
#include "dedt/experts.hpp"

namespace dedt {

/// One rolled-out episode. traj holds the realized sequences (returns-to-go
/// rebuilt from achieved rewards, so telescoping holds exactly); rtg_input
/// is the conditioning sequence that was fed to the model
/// (rtg_input[t+1] = rtg_input[t] - r_t, starting from the target return).
struct Episode {
    Trajectory traj;
    std::vector<double> rtg_input;
    double mean_rate = 0.0;
};

/// Rolls the policy in lockstep across several environments (one forward
/// pass per slot covers the whole batch). The state view each policy step
/// consumes comes from the environment's provider.
std::vector<Episode> dt_rollout_batch(DtModel& model, std::vector<BeamEnv*>& envs,
                                      double target_return, int env_tag);

Episode dt_rollout(DtModel& model, BeamEnv& env, double target_return, int env_tag);

/// Generates expert episodes with the coordinate-ascent optimizer acting on
/// the true cascaded channel, recording the environment's state view as the
/// training state. Episodes are appended to `buffer`.
void collect_expert_episodes(ReplayBuffer& buffer, BeamEnv& env, int episodes, int env_tag,
                             const AoOptions& options, Rng* restart_rng = nullptr);

/// Mean per-slot rate of the expert on `episodes` fresh episodes.
double expert_mean_rate(BeamEnv& env, int episodes, const AoOptions& options,
                        Rng* restart_rng = nullptr);

/// Mean per-slot rate of uniformly random phases.
double random_policy_mean_rate(BeamEnv& env, int episodes, Rng& rng);

}  // namespace dedt
