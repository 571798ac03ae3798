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

#include "dedt/beam_env.hpp"

namespace dedt {

StateProvider true_state_provider() {
    return [](const ChannelRealization& truth, Rng&) { return vectorize_csi(truth.H); };
}

BeamEnv::BeamEnv(EnvConfig cfg, StateProvider provider, uint64_t seed)
    : cfg_(std::move(cfg)),
      corr_(build_correlation(cfg_.geometry)),
      provider_(std::move(provider)),
      channel_rng_(Rng::derive(seed, "env-channel")),
      state_rng_(Rng::derive(seed, "env-state")) {
    cfg_.validate();
}

void BeamEnv::draw_slot() { current_ = sample_slot(cfg_, corr_, channel_rng_); }

Vec BeamEnv::reset() {
    slot_ = 1;
    draw_slot();
    return provider_(current_, state_rng_);
}

BeamEnv::StepResult BeamEnv::step(const Vec& phases) {
    require(slot_ >= 1, "BeamEnv: step before reset");
    require(phases.size() == cfg_.geometry.elements(), "BeamEnv: wrong action length");
    StepResult r;
    r.reward = mrt_rate(phases, current_.H, cfg_.tx_power, cfg_.noise_var);
    if (slot_ >= cfg_.slots_per_episode) {
        r.done = true;
        slot_ = 0;
        return r;
    }
    slot_ += 1;
    draw_slot();
    r.next_state = provider_(current_, state_rng_);
    r.done = false;
    return r;
}

}  // namespace dedt
