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

#include "dedt/ppo.hpp"

#include <chrono>
#include <cmath>

#include "dedt/trajectory.hpp"

namespace dedt {

using nn::Graph;

PpoPolicy::PpoPolicy(int state_dim_, int action_dim_, int hidden_, uint64_t init_seed)
    : state_dim(state_dim_), action_dim(action_dim_), hidden(hidden_) {
    Rng rng(init_seed);
    Graph g(params, false, &rng);
    Mat dummy = Mat::Zero(1, state_dim);
    (void)mean_on_graph(g, dummy);
    (void)value_on_graph(g, dummy);
    (void)g.P("log_std", 1, action_dim, 0.0, -0.5);
}

int PpoPolicy::mean_on_graph(Graph& g, const Mat& scaled_states) const {
    int h = nn::linear(g, g.C(scaled_states), "pi.fc1", state_dim, hidden, 0.1);
    h = g.tape.tanh_op(h);
    h = nn::linear(g, h, "pi.fc2", hidden, hidden, 0.1);
    h = g.tape.tanh_op(h);
    return nn::linear(g, h, "pi.mu", hidden, action_dim, 0.01);
}

int PpoPolicy::value_on_graph(Graph& g, const Mat& scaled_states) const {
    int h = nn::linear(g, g.C(scaled_states), "vf.fc1", state_dim, hidden, 0.1);
    h = g.tape.tanh_op(h);
    h = nn::linear(g, h, "vf.fc2", hidden, hidden, 0.1);
    h = g.tape.tanh_op(h);
    return nn::linear(g, h, "vf.out", hidden, 1, 0.1);
}

Vec PpoPolicy::act_deterministic(const Vec& state) {
    Graph g(params, false);
    Mat s = state.transpose() / state_scale;
    int mu = mean_on_graph(g, s);
    Vec raw = g.tape.val(mu).row(0).transpose();
    return phases_from_pairs_lenient(raw);
}

namespace {

struct Rollout {
    Mat states;      // steps x state_dim (already scaled)
    Mat actions;     // steps x action_dim (raw Gaussian samples)
    Vec logp;        // steps
    Vec rewards;     // steps (scaled)
    Vec values;      // steps
    Vec dones;       // steps (1 when episode ended at this step)
    double mean_raw_rate = 0.0;
    double bootstrap_value = 0.0;
};

Rollout collect_rollout(PpoPolicy& policy, BeamEnv& env, const PpoConfig& cfg, Rng& rng,
                        Vec& pending_state, bool& have_state) {
    const int steps = cfg.rollout_steps;
    Rollout r;
    r.states.resize(steps, policy.state_dim);
    r.actions.resize(steps, policy.action_dim);
    r.logp.resize(steps);
    r.rewards.resize(steps);
    r.values.resize(steps);
    r.dones.resize(steps);

    const Vec log_std = policy.params.at("log_std").value.row(0).transpose();
    const Vec sigma = log_std.array().exp();
    const double log_norm = -0.5 * policy.action_dim * std::log(2.0 * kPi) - log_std.sum();

    double raw_acc = 0.0;
    if (!have_state) {
        pending_state = env.reset();
        have_state = true;
    }
    for (int t = 0; t < steps; ++t) {
        Vec scaled = pending_state / policy.state_scale;
        r.states.row(t) = scaled.transpose();

        Graph g(policy.params, false);
        Mat sm = scaled.transpose();
        int mu_node = policy.mean_on_graph(g, sm);
        int v_node = policy.value_on_graph(g, sm);
        Vec mu = g.tape.val(mu_node).row(0).transpose();
        r.values(t) = g.tape.val(v_node)(0, 0);

        Vec z(policy.action_dim);
        for (int i = 0; i < policy.action_dim; ++i) z(i) = rng.normal();
        Vec action = mu + sigma.cwiseProduct(z);
        r.actions.row(t) = action.transpose();
        r.logp(t) = -0.5 * z.squaredNorm() + log_norm;

        Vec phases = phases_from_pairs_lenient(action);
        auto step = env.step(phases);
        raw_acc += step.reward;
        r.rewards(t) = step.reward / policy.reward_scale;
        r.dones(t) = step.done ? 1.0 : 0.0;
        if (step.done) {
            pending_state = env.reset();
        } else {
            pending_state = step.next_state;
        }
    }
    // bootstrap for the truncated tail
    {
        Graph g(policy.params, false);
        Mat sm = (pending_state / policy.state_scale).transpose();
        r.bootstrap_value = g.tape.val(policy.value_on_graph(g, sm))(0, 0);
    }
    r.mean_raw_rate = raw_acc / steps;
    return r;
}

void compute_gae(const Rollout& r, const PpoConfig& cfg, Vec& advantages, Vec& returns) {
    const int steps = static_cast<int>(r.rewards.size());
    advantages.resize(steps);
    returns.resize(steps);
    double next_adv = 0.0;
    double next_value = r.bootstrap_value;
    for (int t = steps - 1; t >= 0; --t) {
        const double not_done = 1.0 - r.dones(t);
        const double delta = r.rewards(t) + cfg.discount * next_value * not_done - r.values(t);
        next_adv = delta + cfg.discount * cfg.gae_lambda * not_done * next_adv;
        advantages(t) = next_adv;
        next_value = r.values(t);
        returns(t) = advantages(t) + r.values(t);
    }
    const double mean = advantages.mean();
    const double sd = std::sqrt((advantages.array() - mean).square().mean() + 1e-8);
    advantages = (advantages.array() - mean) / sd;
}

void ppo_update(PpoPolicy& policy, const Rollout& r, const Vec& advantages,
                const Vec& returns, const PpoConfig& cfg, nn::AdamW& opt, Rng& rng) {
    const int steps = static_cast<int>(r.rewards.size());
    std::vector<int> order(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i) order[static_cast<size_t>(i)] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = steps - 1; i > 0; --i)
            std::swap(order[static_cast<size_t>(i)],
                      order[static_cast<size_t>(rng.uniform_int(0, i))]);
        for (int start = 0; start < steps; start += cfg.minibatch) {
            const int count = std::min(cfg.minibatch, steps - start);
            Mat s(count, policy.state_dim);
            Mat a(count, policy.action_dim);
            Vec adv(count), ret(count), old_logp(count);
            for (int j = 0; j < count; ++j) {
                const int idx = order[static_cast<size_t>(start + j)];
                s.row(j) = r.states.row(idx);
                a.row(j) = r.actions.row(idx);
                adv(j) = advantages(idx);
                ret(j) = returns(idx);
                old_logp(j) = r.logp(idx);
            }

            Graph g(policy.params, true, &rng);
            auto& t = g.tape;
            int mu = policy.mean_on_graph(g, s);
            int ls = g.P("log_std", 1, policy.action_dim, 0.0, -0.5);
            int inv_sigma = t.exp_op(t.scale(ls, -1.0));
            int diff = t.sub(g.C(a), mu);
            int z = t.mul_rowvec(diff, inv_sigma);
            int zsq = t.rowsum(t.hadamard(z, z));
            int sum_ls = t.weighted_sum(ls, Mat::Constant(1, policy.action_dim, 1.0));
            int logp = t.add_scalar_node(t.scale(zsq, -0.5), t.scale(sum_ls, -1.0));
            // constant -N/2 log(2 pi) cancels in the ratio
            Mat old_shifted = old_logp + Vec::Constant(count, 0.5 * policy.action_dim *
                                                                   std::log(2.0 * kPi));
            int ratio = t.exp_op(t.sub(logp, g.C(old_shifted)));
            int surr1 = t.mul_mask(ratio, adv);
            int surr2 = t.mul_mask(t.clamp_op(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio),
                                   adv);
            int policy_loss = t.weighted_sum(t.minimum(surr1, surr2),
                                             Mat::Constant(count, 1, -1.0 / count));
            int v = policy.value_on_graph(g, s);
            int v_loss = t.sq_error(v, ret, cfg.value_coef / count);
            int loss = t.add(policy_loss, v_loss);
            if (cfg.entropy_coef > 0.0)
                loss = t.add(loss, t.scale(sum_ls, -cfg.entropy_coef));
            const double loss_value = t.val(loss)(0, 0);
            if (!std::isfinite(loss_value))
                throw std::runtime_error("ppo_train: non-finite loss");
            t.backward(loss);
            opt.step(policy.params, g.grads());
        }
    }
}

PpoResult ppo_train_impl(BeamEnv& env, const PpoConfig& cfg, double budget_seconds, Rng& rng) {
    cfg.validate();
    const int state_dim = 2 * env.config().geometry.elements() * env.config().bs_antennas;
    const int action_dim = 2 * env.config().geometry.elements();
    PpoResult result;
    result.policy = PpoPolicy(state_dim, action_dim, cfg.hidden, rng.next_u64());

    nn::AdamW opt;
    opt.lr = cfg.lr;
    opt.grad_clip = 0.5;

    const auto start_time = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    };

    Vec pending_state;
    bool have_state = false;
    int64_t env_steps = 0;
    bool first = true;
    while (true) {
        if (budget_seconds > 0.0) {
            if (!first && elapsed() >= budget_seconds) break;
        } else if (env_steps >= cfg.total_env_steps) {
            break;
        }
        Rollout r = collect_rollout(result.policy, env, cfg, rng, pending_state, have_state);
        if (first) {
            // fix input/reward scales from the first rollout
            double rms = std::sqrt(r.states.squaredNorm() / r.states.size());
            if (rms > 0.0) {
                result.policy.state_scale = rms;
                r.states /= rms;
            }
            double mean_abs = r.rewards.cwiseAbs().mean();
            if (mean_abs > 0.0) {
                result.policy.reward_scale = mean_abs;
                r.rewards /= mean_abs;
            }
            first = false;
        }
        Vec advantages, returns;
        compute_gae(r, cfg, advantages, returns);
        ppo_update(result.policy, r, advantages, returns, cfg, opt, rng);
        result.epoch_mean_rate.push_back(r.mean_raw_rate);
        env_steps += cfg.rollout_steps;
    }
    return result;
}

}  // namespace

PpoResult ppo_train(BeamEnv& env, const PpoConfig& cfg, Rng& rng) {
    return ppo_train_impl(env, cfg, 0.0, rng);
}

PpoResult ppo_train_for_seconds(BeamEnv& env, const PpoConfig& cfg, double budget_seconds,
                                Rng& rng) {
    require(budget_seconds > 0.0, "ppo_train_for_seconds: budget must be positive");
    return ppo_train_impl(env, cfg, budget_seconds, rng);
}

double evaluate_ppo_policy(PpoPolicy& policy, BeamEnv& env, int episodes) {
    double acc = 0.0;
    int steps = 0;
    for (int e = 0; e < episodes; ++e) {
        Vec state = env.reset();
        while (true) {
            Vec phases = policy.act_deterministic(state);
            auto res = env.step(phases);
            acc += res.reward;
            steps += 1;
            if (res.done) break;
            state = res.next_state;
        }
    }
    return acc / steps;
}

}  // namespace dedt
