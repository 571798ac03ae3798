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

#include <functional>

#include "dedt/channel.hpp"
#include "dedt/csi.hpp"

namespace dedt {

/// Produces the CSI view an agent sees for the current slot (ground truth,
/// imputed, random-filled, ...). Receives the true channel and a dedicated
/// RNG stream for masking/estimation noise.
using StateProvider = std::function<Vec(const ChannelRealization& truth, Rng& rng)>;

/// Ground-truth view.
StateProvider true_state_provider();

/// Slot-stepped beamforming environment. Channels are drawn i.i.d. across
/// slots; the reward of a step is exactly mrt_rate of the action against
/// the current true channel. Not safe for concurrent stepping; run
/// independent instances in parallel instead.
class BeamEnv {
  public:
    BeamEnv(EnvConfig cfg, StateProvider provider, uint64_t seed);

    /// Starts an episode and returns the first slot's state view.
    Vec reset();

    struct StepResult {
        double reward = 0.0;
        Vec next_state;  ///< empty when done
        bool done = false;
    };
    /// Applies RIS phases to the current slot. Advances to the next slot.
    StepResult step(const Vec& phases);

    const ChannelRealization& current_truth() const { return current_; }
    const EnvConfig& config() const { return cfg_; }
    const CorrelationMatrix& correlation() const { return corr_; }
    int slot() const { return slot_; }
    int horizon() const { return cfg_.slots_per_episode; }

  private:
    EnvConfig cfg_;
    CorrelationMatrix corr_;
    StateProvider provider_;
    Rng channel_rng_;
    Rng state_rng_;
    ChannelRealization current_;
    int slot_ = 0;  ///< 0 = not started; slots run 1..T

    void draw_slot();
};

}  // namespace dedt
