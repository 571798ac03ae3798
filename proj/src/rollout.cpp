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

#include "dedt/rollout.hpp"

namespace dedt {

std::vector<Episode> dt_rollout_batch(DtModel& model, std::vector<BeamEnv*>& envs,
                                      double target_return, int env_tag) {
    require(!envs.empty(), "dt_rollout_batch: no environments");
    require(target_return >= 0.0, "dt_rollout_batch: target return must be >= 0");
    const size_t b = envs.size();
    const int horizon = envs.front()->horizon();

    struct Running {
        std::vector<double> rtg_input;
        std::vector<Vec> states;
        std::vector<Vec> actions;
        std::vector<double> rewards;
        bool done = false;
    };
    std::vector<Running> run(b);
    for (size_t e = 0; e < b; ++e) {
        require(envs[e]->horizon() == horizon, "dt_rollout_batch: mixed horizons");
        run[e].rtg_input.push_back(target_return);
        run[e].states.push_back(envs[e]->reset());
    }

    const int window = model.cfg.context_window;
    for (int t = 0; t < horizon; ++t) {
        std::vector<TokenWindow> windows(b);
        for (size_t e = 0; e < b; ++e) {
            const int start = std::max(0, t - window + 1);
            TokenWindow w;
            w.env_tag = env_tag;
            for (int u = start; u <= t; ++u) {
                w.timesteps.push_back(u);
                w.rtg.push_back(run[e].rtg_input[static_cast<size_t>(u)]);
                w.states.push_back(run[e].states[static_cast<size_t>(u)]);
                if (u < t) w.actions.push_back(run[e].actions[static_cast<size_t>(u)]);
            }
            w.last_action_present = false;
            windows[e] = std::move(w);
        }

        nn::Graph g(model.params, false);
        auto out = model.forward_on_graph(g, windows, /*predict_all=*/false);
        const Mat& raw = g.tape.val(out.pred_node);

        for (size_t e = 0; e < b; ++e) {
            Vec action = normalize_action_pairs(raw.row(static_cast<Eigen::Index>(e)).transpose());
            Vec phases = phases_from_pairs(action);
            auto step = envs[e]->step(phases);
            run[e].actions.push_back(action);
            run[e].rewards.push_back(step.reward);
            run[e].rtg_input.push_back(run[e].rtg_input.back() - step.reward);
            if (!step.done) run[e].states.push_back(step.next_state);
        }
    }

    std::vector<Episode> episodes(b);
    for (size_t e = 0; e < b; ++e) {
        Episode ep;
        std::vector<Vec> states(run[e].states.begin(),
                                run[e].states.begin() + horizon);
        ep.traj = build_trajectory(std::move(states), std::move(run[e].actions),
                                   std::move(run[e].rewards));
        ep.rtg_input = std::move(run[e].rtg_input);
        ep.mean_rate = ep.traj.returns_to_go.front() / horizon;
        episodes[e] = std::move(ep);
    }
    return episodes;
}

Episode dt_rollout(DtModel& model, BeamEnv& env, double target_return, int env_tag) {
    std::vector<BeamEnv*> envs = {&env};
    return dt_rollout_batch(model, envs, target_return, env_tag).front();
}

void collect_expert_episodes(ReplayBuffer& buffer, BeamEnv& env, int episodes, int env_tag,
                             const AoOptions& options, Rng* restart_rng) {
    for (int e = 0; e < episodes; ++e) {
        std::vector<Vec> states, actions;
        std::vector<double> rewards;
        Vec state = env.reset();
        while (true) {
            const CMat& truth = env.current_truth().H;
            AoResult expert = ao_optimize(truth, env.config().tx_power,
                                          env.config().noise_var, options, restart_rng);
            states.push_back(state);
            actions.push_back(pairs_from_phases(expert.phases));
            auto step = env.step(expert.phases);
            rewards.push_back(step.reward);
            if (step.done) break;
            state = step.next_state;
        }
        Trajectory traj = build_trajectory(std::move(states), std::move(actions),
                                           std::move(rewards));
        const double prompt = traj.returns_to_go.front();
        buffer.add(std::move(traj), env_tag, prompt);
    }
}

double expert_mean_rate(BeamEnv& env, int episodes, const AoOptions& options,
                        Rng* restart_rng) {
    double acc = 0.0;
    int steps = 0;
    for (int e = 0; e < episodes; ++e) {
        env.reset();
        while (true) {
            AoResult expert = ao_optimize(env.current_truth().H, env.config().tx_power,
                                          env.config().noise_var, options, restart_rng);
            auto step = env.step(expert.phases);
            acc += step.reward;
            steps += 1;
            if (step.done) break;
        }
    }
    return acc / steps;
}

double random_policy_mean_rate(BeamEnv& env, int episodes, Rng& rng) {
    double acc = 0.0;
    int steps = 0;
    const int n = env.config().geometry.elements();
    for (int e = 0; e < episodes; ++e) {
        env.reset();
        while (true) {
            auto step = env.step(random_phases(n, rng));
            acc += step.reward;
            steps += 1;
            if (step.done) break;
        }
    }
    return acc / steps;
}

}  // namespace dedt
