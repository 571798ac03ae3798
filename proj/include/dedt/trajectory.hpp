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

#include "dedt/common.hpp"

namespace dedt {

/// Unit-circle action embedding: phases theta_n map to interleaved
/// (cos, sin) pairs [cos t0, sin t0, cos t1, sin t1, ...], avoiding the 2*pi
/// wrap discontinuity in regression losses.
Vec pairs_from_phases(const Vec& phases);
/// Inverse map; pairs are renormalized first, zero-norm pairs are an error.
/// Returned phases lie in (-pi, pi].
Vec phases_from_pairs(const Vec& pairs);

/// Same map but a zero-norm pair yields phase 0 instead of throwing (for
/// raw, unnormalized policy outputs).
Vec phases_from_pairs_lenient(const Vec& pairs);

/// Wraps to (-pi, pi] and pins the global phase so that theta_0 == 0
/// exactly (the rate is invariant; regression targets must be unique).
Vec canonicalize_phases(const Vec& phases);

/// One episode of (return-to-go, state, action, reward) sequences.
struct Trajectory {
    std::vector<double> returns_to_go;
    std::vector<Vec> states;    ///< CSI vectors of length 2NM
    std::vector<Vec> actions;   ///< 2N unit-norm (cos, sin) pairs
    std::vector<double> rewards;

    int length() const { return static_cast<int>(rewards.size()); }
    void validate() const;
};

/// Returns-to-go by reverse cumulative sum of the rewards.
Trajectory build_trajectory(std::vector<Vec> states, std::vector<Vec> actions,
                            std::vector<double> rewards);

/// Offline trajectory store; all episodes share N, M and T.
struct ReplayBuffer {
    std::vector<Trajectory> trajectories;
    std::vector<int> env_tags;       ///< one per trajectory
    std::vector<double> prompts;     ///< target-return prompt per trajectory
    int elements = 0;                ///< N
    int antennas = 0;                ///< M
    int horizon = 0;                 ///< T

    void add(Trajectory traj, int env_tag, double prompt);
    void validate() const;
};

}  // namespace dedt
