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

#include "dedt/dt_model.hpp"

#include <algorithm>
#include <cmath>

namespace dedt {

using nn::Graph;

TokenWindow encode_tokens(const Trajectory& traj, int prefix_len, int window, int env_tag) {
    require(prefix_len >= 1 && prefix_len <= traj.length(),
            "encode_tokens: prefix length out of range");
    require(window >= 1, "encode_tokens: window must be >= 1");
    const int start = std::max(0, prefix_len - window);
    TokenWindow w;
    w.env_tag = env_tag;
    for (int t = start; t < prefix_len; ++t) {
        w.timesteps.push_back(t);
        w.rtg.push_back(traj.returns_to_go[static_cast<size_t>(t)]);
        w.states.push_back(traj.states[static_cast<size_t>(t)]);
        if (t + 1 < prefix_len) w.actions.push_back(traj.actions[static_cast<size_t>(t)]);
    }
    w.last_action_present = false;
    return w;
}

DtModel::DtModel(const DtConfig& c, uint64_t init_seed) : cfg(c), init_seed_(init_seed) {
    require(cfg.width % cfg.heads == 0, "DtConfig: heads must divide width");
    touch_params();
}

void DtModel::touch_params() {
    Rng rng(init_seed_);
    Graph g(params, false, &rng);
    TokenWindow w;
    w.timesteps = {0};
    w.rtg = {0.0};
    w.states = {Vec::Zero(cfg.state_dim())};
    w.last_action_present = false;
    // one present action is needed so the action embedding exists
    TokenWindow w2 = w;
    w2.timesteps = {0, 1};
    w2.rtg = {0.0, 0.0};
    w2.states = {Vec::Zero(cfg.state_dim()), Vec::Zero(cfg.state_dim())};
    w2.actions = {Vec::Zero(cfg.action_dim())};
    (void)forward_on_graph(g, {w2}, true);
}

DtModel::ForwardOut DtModel::forward_on_graph(Graph& g, const std::vector<TokenWindow>& batch,
                                              bool predict_all) const {
    const int b = static_cast<int>(batch.size());
    require(b >= 1, "dt forward: empty batch");
    const int d = cfg.width;
    const int sdim = cfg.state_dim();
    const int adim = cfg.action_dim();

    int total_l = 0, total_a = 0;
    for (const auto& w : batch) {
        require(w.length() >= 1, "dt forward: empty window");
        require(static_cast<int>(w.actions.size()) ==
                    w.length() - (w.last_action_present ? 0 : 1),
                "dt forward: action count mismatch");
        total_l += w.length();
        total_a += static_cast<int>(w.actions.size());
    }

    Mat rtg_in(total_l, 1);
    Mat state_in(total_l, sdim);
    Mat act_in(std::max(total_a, 1), adim);
    if (total_a == 0) act_in.setZero();
    std::vector<int> tag_idx(b);
    std::vector<int> time_idx;  // one entry per non-tag token, in sequence order
    std::vector<int> seq_idx;   // gather indices into the embedding pile
    std::vector<int> time_pile_idx;
    std::vector<int> lens(b);
    std::vector<int> pred_rows;
    std::vector<std::pair<int, int>> pred_map;

    // pile layout: [tags (b)] [rtg (total_l)] [states (total_l)] [actions (total_a)]
    const int rtg_base = b;
    const int state_base = b + total_l;
    const int act_base = b + 2 * total_l;

    int lo = 0, ao = 0, seq_pos = 0;
    for (int s = 0; s < b; ++s) {
        const TokenWindow& w = batch[s];
        const int L = w.length();
        tag_idx[s] = std::clamp(w.env_tag, 0, cfg.env_tags - 1);
        lens[s] = 1 + w.token_count();

        seq_idx.push_back(s);  // tag token
        time_pile_idx.push_back(0);
        int local_pos = 1;
        for (int l = 0; l < L; ++l) {
            const int abs_t = std::clamp(w.timesteps[static_cast<size_t>(l)], 0,
                                         cfg.max_timesteps - 1);
            rtg_in(lo + l, 0) = w.rtg[static_cast<size_t>(l)] / rtg_scale;
            state_in.row(lo + l) = w.states[static_cast<size_t>(l)].transpose() / state_scale;

            seq_idx.push_back(rtg_base + lo + l);
            time_idx.push_back(abs_t);
            time_pile_idx.push_back(static_cast<int>(time_idx.size()));
            local_pos++;

            seq_idx.push_back(state_base + lo + l);
            time_idx.push_back(abs_t);
            time_pile_idx.push_back(static_cast<int>(time_idx.size()));
            if (predict_all || l == L - 1) {
                pred_rows.push_back(seq_pos + local_pos);
                pred_map.emplace_back(s, l);
            }
            local_pos++;

            const bool has_action = l < static_cast<int>(w.actions.size());
            if (has_action) {
                act_in.row(ao) = w.actions[static_cast<size_t>(l)].transpose();
                seq_idx.push_back(act_base + ao);
                time_idx.push_back(abs_t);
                time_pile_idx.push_back(static_cast<int>(time_idx.size()));
                ao++;
                local_pos++;
            }
        }
        lo += L;
        seq_pos += lens[s];
    }

    auto& t = g.tape;
    int rtg_e = nn::linear(g, g.C(rtg_in), "emb_rtg", 1, d);
    int st_e = nn::linear(g, g.C(state_in), "emb_state", sdim, d);
    int ac_e = nn::linear(g, g.C(act_in), "emb_action", adim, d);
    int tag_e = t.gather_rows(g.P("tag_table", cfg.env_tags, d, 0.02), tag_idx);
    int pile = t.concat_rows(t.concat_rows(tag_e, rtg_e), t.concat_rows(st_e, ac_e));
    int x = t.gather_rows(pile, seq_idx);

    // timestep encodings (tag tokens pick the zero row of the time pile)
    int time_rows = t.gather_rows(g.P("time_table", cfg.max_timesteps, d, 0.02), time_idx);
    int time_pile = t.concat_rows(g.C(Mat::Zero(1, d)), time_rows);
    x = t.add(x, t.gather_rows(time_pile, time_pile_idx));
    x = g.dropout(x, cfg.dropout);

    for (int blk = 0; blk < cfg.blocks; ++blk)
        x = nn::transformer_block(g, x, "blk" + std::to_string(blk), d, cfg.heads, lens,
                                  /*causal=*/true, cfg.dropout, cfg.ffn_mult);
    x = nn::layer_norm(g, x, "ln_f", d);

    int picked = t.gather_rows(x, pred_rows);
    ForwardOut out;
    out.pred_node = nn::linear(g, picked, "head", d, adim);
    out.rows = std::move(pred_map);
    return out;
}

Vec normalize_action_pairs(const Vec& raw) {
    Vec out(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); i += 2) {
        const double norm = std::max(std::hypot(raw(i), raw(i + 1)), 1e-12);
        out(i) = raw(i) / norm;
        out(i + 1) = raw(i + 1) / norm;
    }
    return out;
}

Vec DtModel::predict_action(const TokenWindow& window) {
    Graph g(params, false);
    ForwardOut out = forward_on_graph(g, {window}, /*predict_all=*/false);
    return normalize_action_pairs(g.tape.val(out.pred_node).row(0).transpose());
}

Mat DtModel::predict_all_raw(const TokenWindow& window) {
    Graph g(params, false);
    ForwardOut out = forward_on_graph(g, {window}, /*predict_all=*/true);
    return g.tape.val(out.pred_node);
}

namespace {

void set_scales_from_buffer(DtModel& model, const ReplayBuffer& buffer) {
    if (model.rtg_scale != 1.0 || model.state_scale != 1.0) return;
    double rtg_acc = 0.0;
    double ss = 0.0;
    int64_t entries = 0;
    for (const auto& traj : buffer.trajectories) {
        rtg_acc += std::abs(traj.returns_to_go.front());
        for (const auto& s : traj.states) {
            ss += s.squaredNorm();
            entries += s.size();
        }
    }
    const double rtg = rtg_acc / static_cast<double>(buffer.trajectories.size());
    const double rms = std::sqrt(ss / static_cast<double>(entries));
    model.rtg_scale = rtg > 0.0 ? rtg : 1.0;
    model.state_scale = rms > 0.0 ? rms : 1.0;
}

TokenWindow train_window(const ReplayBuffer& buffer, size_t traj_idx, int end_t, int window) {
    const Trajectory& traj = buffer.trajectories[traj_idx];
    const int start = std::max(0, end_t - window + 1);
    TokenWindow w;
    w.env_tag = buffer.env_tags[traj_idx];
    for (int t = start; t <= end_t; ++t) {
        w.timesteps.push_back(t);
        w.rtg.push_back(traj.returns_to_go[static_cast<size_t>(t)]);
        w.states.push_back(traj.states[static_cast<size_t>(t)]);
        w.actions.push_back(traj.actions[static_cast<size_t>(t)]);
    }
    w.last_action_present = true;
    return w;
}

double dt_train_iteration(DtModel& model, const ReplayBuffer& buffer,
                          const DtTrainConfig& cfg, nn::AdamW& opt, Rng& rng,
                          const std::vector<std::string>& frozen) {
    std::vector<TokenWindow> batch;
    batch.reserve(static_cast<size_t>(cfg.batch));
    for (int i = 0; i < cfg.batch; ++i) {
        const size_t traj_idx = static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(buffer.trajectories.size()) - 1));
        const int end_t = static_cast<int>(rng.uniform_int(0, buffer.horizon - 1));
        batch.push_back(train_window(buffer, traj_idx, end_t, model.cfg.context_window));
    }

    Graph g(model.params, /*train=*/true, &rng);
    auto out = model.forward_on_graph(g, batch, /*predict_all=*/!cfg.final_only);
    Mat targets(static_cast<Eigen::Index>(out.rows.size()), model.cfg.action_dim());
    for (size_t r = 0; r < out.rows.size(); ++r) {
        const auto& [s, l] = out.rows[r];
        targets.row(static_cast<Eigen::Index>(r)) =
            batch[static_cast<size_t>(s)].actions[static_cast<size_t>(l)].transpose();
    }
    const double w = 1.0 / static_cast<double>(targets.size());
    int loss = g.tape.sq_error(out.pred_node, targets, w);
    const double loss_value = g.tape.val(loss)(0, 0);
    if (!std::isfinite(loss_value))
        throw std::runtime_error("dt_train: non-finite loss (training diverged)");
    g.tape.backward(loss);
    opt.step(model.params, g.grads(), frozen);
    return loss_value;
}

}  // namespace

std::vector<double> dt_train(DtModel& model, const ReplayBuffer& buffer,
                             const DtTrainConfig& cfg, Rng& rng) {
    require(!buffer.trajectories.empty(), "dt_train: empty buffer");
    set_scales_from_buffer(model, buffer);

    nn::AdamW opt;
    opt.lr = cfg.lr;
    opt.grad_clip = cfg.grad_clip;
    opt.weight_decay = cfg.weight_decay;

    std::vector<double> losses;
    losses.reserve(static_cast<size_t>(cfg.iters));
    for (int it = 0; it < cfg.iters; ++it)
        losses.push_back(dt_train_iteration(model, buffer, cfg, opt, rng, {}));
    return losses;
}

std::vector<double> fine_tune(DtModel& model, const ReplayBuffer& fewshot, int steps,
                              double lr, Rng& rng) {
    if (steps == 0) return {};
    require(!fewshot.trajectories.empty(), "fine_tune: empty buffer");

    std::vector<std::string> frozen;
    for (const auto& [name, param] : model.params.all())
        if (name.rfind("head", 0) != 0) frozen.push_back(name);

    nn::AdamW opt;
    opt.lr = lr;
    opt.grad_clip = 1.0;

    DtTrainConfig cfg;
    cfg.batch = std::min<int>(32, static_cast<int>(fewshot.trajectories.size()) * 4);

    std::vector<double> losses;
    losses.reserve(static_cast<size_t>(steps));
    for (int it = 0; it < steps; ++it)
        losses.push_back(dt_train_iteration(model, fewshot, cfg, opt, rng, frozen));
    return losses;
}

}  // namespace dedt
