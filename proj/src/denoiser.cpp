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

#include "dedt/denoiser.hpp"

namespace dedt {

using nn::Graph;

DenoiserModel::DenoiserModel(const DenoiserConfig& c, uint64_t init_seed)
    : cfg(c), init_seed_(init_seed) {
    require(cfg.width % cfg.heads == 0, "DenoiserConfig: heads must divide width");
    touch_params();
}

void DenoiserModel::touch_params() {
    // Run one dummy forward so every parameter exists up front with a
    // deterministic initialization order (Graph::P creates on first use).
    Rng rng(init_seed_);
    Graph g(params, false, &rng);
    Condition empty;
    empty.tokens = Mat::Zero(0, cfg.token_dim());
    empty.indicator = Vec::Zero(cfg.elements);
    empty.mirror = Mat::Zero(cfg.elements, cfg.token_dim());
    DenoiserInput in;
    in.x_tokens = Mat::Zero(cfg.elements, cfg.token_dim());
    in.cond = &empty;
    in.k = 1;
    (void)forward_on_graph(g, {in});
}

int DenoiserModel::forward_on_graph(Graph& g, const std::vector<DenoiserInput>& batch) const {
    const int n = cfg.elements;
    const int tok = cfg.token_dim();
    const int d = cfg.width;
    const int b = static_cast<int>(batch.size());
    require(b >= 1, "denoiser: empty batch");

    // stack full-sequence inputs and condition tokens
    Mat full(b * n, cfg.input_dim());
    int cond_rows = 0;
    for (const auto& s : batch) cond_rows += static_cast<int>(s.cond->tokens.rows());
    Mat cond_stack(cond_rows, tok);
    std::vector<int> full_pos(b * n), sample_of_row(b * n), cond_pos;
    std::vector<int> q_lens(b, n), k_lens(b);
    std::vector<double> steps(b);
    cond_pos.reserve(cond_rows);

    int co = 0;
    for (int s = 0; s < b; ++s) {
        const DenoiserInput& in = batch[s];
        require(in.x_tokens.rows() == n && in.x_tokens.cols() == tok,
                "denoiser: bad x token shape");
        require(in.cond->indicator.size() == n, "denoiser: bad indicator length");
        for (int i = 0; i < n; ++i) {
            const int r = s * n + i;
            full.block(r, 0, 1, tok) = in.x_tokens.row(i);
            full.block(r, tok, 1, tok) = in.cond->mirror.row(i);
            full(r, 2 * tok) = in.cond->indicator(i);
            full_pos[r] = i;
            sample_of_row[r] = s;
        }
        const int np = static_cast<int>(in.cond->tokens.rows());
        k_lens[s] = np;
        if (np > 0) cond_stack.middleRows(co, np) = in.cond->tokens;
        for (int r = 0; r < np; ++r) cond_pos.push_back(in.cond->observed[static_cast<size_t>(r)]);
        co += np;
        steps[s] = static_cast<double>(in.k);
    }

    auto& t = g.tape;
    int x = nn::linear(g, g.C(full), "in_emb", cfg.input_dim(), d);
    int pos_full = g.P("pos_full", n, d, 0.02);
    x = t.add(x, t.gather_rows(pos_full, full_pos));

    int step = g.C(nn::sinusoidal_embedding(steps, d));
    step = nn::linear(g, step, "step.fc1", d, d);
    step = t.gelu(step);
    step = nn::linear(g, step, "step.fc2", d, d);
    x = t.add(x, t.gather_rows(step, sample_of_row));

    int cond = nn::linear(g, g.C(cond_stack), "cond_emb", tok, d);
    int pos_cond = g.P("pos_cond", n, d, 0.02);
    cond = t.add(cond, t.gather_rows(pos_cond, cond_pos));

    x = nn::cross_attention_block(g, x, cond, "cross", d, cfg.heads, q_lens, k_lens, 0.0,
                                  cfg.ffn_mult);
    for (int blk = 0; blk < cfg.self_blocks; ++blk)
        x = nn::transformer_block(g, x, "self" + std::to_string(blk), d, cfg.heads, q_lens,
                                  false, 0.0, cfg.ffn_mult);

    // kernel-3 convolution over the element axis, residual into the trunk
    int h = nn::layer_norm(g, x, "conv_ln", d);
    int prev = t.matmul(t.shift_blocks(h, 1, n), g.P("conv.wm1", d, d, 0.02));
    int cur = t.matmul(h, g.P("conv.w0", d, d, 0.02));
    int next = t.matmul(t.shift_blocks(h, -1, n), g.P("conv.wp1", d, d, 0.02));
    int conv = t.add(t.add(prev, cur), next);
    conv = t.add_rowvec(conv, g.P("conv.b", 1, d, 0.0));
    conv = t.gelu(conv);
    x = t.add(x, conv);

    x = nn::layer_norm(g, x, "head_ln", d);
    return nn::linear(g, x, "out", d, tok);
}

Mat DenoiserModel::predict_noise_tokens(const std::vector<DenoiserInput>& batch) {
    Graph g(params, false);
    int out = forward_on_graph(g, batch);
    return g.tape.val(out);
}

}  // namespace dedt
