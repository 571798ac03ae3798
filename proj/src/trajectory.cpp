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

#include "dedt/trajectory.hpp"

#include <cmath>

namespace dedt {

Vec pairs_from_phases(const Vec& phases) {
    Vec out(2 * phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        out(2 * i) = std::cos(phases(i));
        out(2 * i + 1) = std::sin(phases(i));
    }
    return out;
}

Vec phases_from_pairs(const Vec& pairs) {
    require(pairs.size() % 2 == 0, "phases_from_pairs: length must be even");
    Vec out(pairs.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double c = pairs(2 * i);
        const double s = pairs(2 * i + 1);
        const double norm = std::hypot(c, s);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw std::domain_error("phases_from_pairs: zero-norm pair");
        double theta = std::atan2(s, c);
        if (theta <= -kPi) theta += 2.0 * kPi;
        out(i) = theta;
    }
    return out;
}

Vec phases_from_pairs_lenient(const Vec& pairs) {
    require(pairs.size() % 2 == 0, "phases_from_pairs: length must be even");
    Vec out(pairs.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        double theta = std::atan2(pairs(2 * i + 1), pairs(2 * i));
        if (theta <= -kPi) theta += 2.0 * kPi;
        out(i) = theta;
    }
    return out;
}

Vec canonicalize_phases(const Vec& phases) {
    Vec out(phases.size());
    const double ref = phases(0);
    for (Eigen::Index i = 0; i < phases.size(); ++i) out(i) = wrap_angle(phases(i) - ref);
    out(0) = 0.0;
    return out;
}

void Trajectory::validate() const {
    const size_t t = rewards.size();
    require(t >= 1, "Trajectory: empty");
    require(states.size() == t && actions.size() == t && returns_to_go.size() == t,
            "Trajectory: sequence length mismatch");
    for (size_t i = 0; i + 1 < t; ++i)
        require(std::abs(returns_to_go[i] - returns_to_go[i + 1] - rewards[i]) < 1e-9,
                "Trajectory: returns-to-go do not telescope");
    require(std::abs(returns_to_go[t - 1] - rewards[t - 1]) < 1e-9,
            "Trajectory: final return-to-go must equal the final reward");
    for (const Vec& a : actions)
        for (Eigen::Index i = 0; i < a.size(); i += 2) {
            const double n = a(i) * a(i) + a(i + 1) * a(i + 1);
            require(std::abs(n - 1.0) < 1e-9, "Trajectory: action pair not unit-norm");
        }
}

Trajectory build_trajectory(std::vector<Vec> states, std::vector<Vec> actions,
                            std::vector<double> rewards) {
    require(!rewards.empty(), "build_trajectory: empty episode");
    require(states.size() == rewards.size() && actions.size() == rewards.size(),
            "build_trajectory: sequence length mismatch");
    Trajectory traj;
    traj.states = std::move(states);
    traj.actions = std::move(actions);
    traj.rewards = std::move(rewards);
    traj.returns_to_go.resize(traj.rewards.size());
    double acc = 0.0;
    for (int i = traj.length() - 1; i >= 0; --i) {
        acc += traj.rewards[static_cast<size_t>(i)];
        traj.returns_to_go[static_cast<size_t>(i)] = acc;
    }
    return traj;
}

void ReplayBuffer::add(Trajectory traj, int env_tag, double prompt) {
    if (trajectories.empty()) {
        horizon = traj.length();
        require(!traj.states.empty(), "ReplayBuffer: empty trajectory");
        elements = static_cast<int>(traj.actions.front().size()) / 2;
        antennas = static_cast<int>(traj.states.front().size()) / (2 * elements);
    }
    require(traj.length() == horizon, "ReplayBuffer: horizon mismatch");
    require(static_cast<int>(traj.actions.front().size()) == 2 * elements,
            "ReplayBuffer: action dimension mismatch");
    require(static_cast<int>(traj.states.front().size()) == 2 * elements * antennas,
            "ReplayBuffer: state dimension mismatch");
    trajectories.push_back(std::move(traj));
    env_tags.push_back(env_tag);
    prompts.push_back(prompt);
}

void ReplayBuffer::validate() const {
    require(trajectories.size() == env_tags.size() && trajectories.size() == prompts.size(),
            "ReplayBuffer: metadata length mismatch");
    for (const auto& t : trajectories) {
        t.validate();
        require(t.length() == horizon, "ReplayBuffer: horizon mismatch");
    }
}

}  // namespace dedt
