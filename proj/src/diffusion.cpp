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

#include "dedt/diffusion.hpp"

#include <cmath>

namespace dedt {

Vec forward_diffuse(const Vec& x0, int k, const Vec& eps, const NoiseSchedule& sched) {
    require(k >= 1 && k <= sched.steps, "forward_diffuse: k out of range");
    require(eps.size() == x0.size(), "forward_diffuse: eps length mismatch");
    const double abar = sched.abar_at(k);
    return std::sqrt(abar) * x0 + std::sqrt(1.0 - abar) * eps;
}

Vec reverse_step(const Vec& x_k, const Vec& eps_hat, int k, const NoiseSchedule& sched,
                 Rng& rng) {
    require(k >= 1 && k <= sched.steps, "reverse_step: k out of range");
    require(eps_hat.size() == x_k.size(), "reverse_step: eps length mismatch");
    const double bk = sched.b_at(k);
    const double abar = sched.abar_at(k);
    Vec out = (x_k - (bk / std::sqrt(1.0 - abar)) * eps_hat) / std::sqrt(1.0 - bk);
    if (k > 1) {
        const double sd = std::sqrt(sched.sigma_sq(k));
        for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sd * rng.normal();
    }
    return out;
}

Vec denoiser_forward(DenoiserModel& model, const Vec& x_k, const Condition& cond, int k) {
    const int n = model.cfg.elements;
    const int m = model.cfg.antennas;
    DenoiserInput in;
    in.x_tokens = csi_tokens(x_k, n, m);
    in.cond = &cond;
    in.k = k;
    Mat tokens = model.predict_noise_tokens({in});
    return csi_from_tokens(tokens, n, m);
}

Condition scale_condition(const Condition& cond, double inv_scale) {
    Condition out = cond;
    out.tokens *= inv_scale;
    out.mirror *= inv_scale;
    return out;
}

double diffusion_batch_loss(const std::vector<Vec>& eps, const std::vector<Vec>& eps_hat) {
    require(!eps.empty() && eps.size() == eps_hat.size(), "loss: batch size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < eps.size(); ++i) acc += (eps[i] - eps_hat[i]).squaredNorm();
    return acc / static_cast<double>(eps.size());
}

double dm_train_step(DenoiserModel& model, const std::vector<DmTrainSample>& batch,
                     const NoiseSchedule& sched, Rng& rng, const nn::AdamW& opt,
                     const DmStepOptions& options) {
    require(!batch.empty(), "dm_train_step: empty batch");
    const int n = model.cfg.elements;
    const int m = model.cfg.antennas;
    const int dim = 2 * n * m;

    std::vector<DenoiserInput> inputs;
    std::vector<Mat> target_blocks;
    for (const auto& s : batch) {
        std::vector<int> ks;
        if (options.all_steps) {
            for (int k = 1; k <= sched.steps; ++k) ks.push_back(k);
        } else {
            ks.push_back(static_cast<int>(rng.uniform_int(1, sched.steps)));
        }
        for (int k : ks) {
            Vec eps(dim);
            for (int i = 0; i < dim; ++i) eps(i) = rng.normal();
            Vec x_k = forward_diffuse(s.x0_norm, k, eps, sched);
            DenoiserInput in;
            in.x_tokens = csi_tokens(x_k, n, m);
            in.cond = &s.cond_norm;
            in.k = k;
            inputs.push_back(std::move(in));
            target_blocks.push_back(csi_tokens(eps, n, m));
        }
    }
    const int rows_per = n;
    Mat target_stack(static_cast<Eigen::Index>(target_blocks.size()) * rows_per,
                     model.cfg.token_dim());
    for (size_t i = 0; i < target_blocks.size(); ++i)
        target_stack.middleRows(static_cast<Eigen::Index>(i) * rows_per, rows_per) =
            target_blocks[i];

    nn::Graph g(model.params, true, &rng);
    int out = model.forward_on_graph(g, inputs);
    // mean over *samples* of the summed squared error, matching the
    // expected-value convention E||eps||^2 = 2NM for a zero predictor
    const double w = 1.0 / static_cast<double>(batch.size());
    int loss = g.tape.sq_error(out, target_stack, w);
    const double loss_value = g.tape.val(loss)(0, 0);
    if (!std::isfinite(loss_value))
        throw std::runtime_error("dm_train_step: non-finite loss (training diverged)");
    g.tape.backward(loss);
    opt.step(model.params, g.grads());
    return loss_value;
}

namespace {

MaskPattern draw_mask(int n, const DmTrainConfig& cfg, Rng& rng) {
    const double rho = cfg.rho_min + (cfg.rho_max - cfg.rho_min) * rng.uniform();
    int count = static_cast<int>(std::lround((1.0 - rho) * n));
    count = std::max(0, std::min(n, count));
    if (cfg.grid_mask_mode) return grid_mask(n, 1.0 - static_cast<double>(count) / n);
    return random_mask(n, count, rng);
}

}  // namespace

DmTrainResult train_dm(DenoiserModel& model, const NoiseSchedule& sched,
                       const std::vector<Vec>& dataset, const DmTrainConfig& cfg, Rng& rng) {
    require(!dataset.empty(), "train_dm: empty dataset");
    const int n = model.cfg.elements;
    const int m = model.cfg.antennas;
    const int dim = 2 * n * m;
    require(dataset.front().size() == dim, "train_dm: dataset dimension mismatch");

    // global RMS normalization and per-complex-entry signal variance
    double ss = 0.0;
    for (const auto& x : dataset) ss += x.squaredNorm();
    const double rms = std::sqrt(ss / (static_cast<double>(dataset.size()) * dim));
    model.norm_scale = (rms > 0.0) ? rms : 1.0;
    model.entry_var = 2.0 * rms * rms;  // complex entry = two real components
    const double inv_scale = 1.0 / model.norm_scale;

    nn::AdamW opt;
    opt.lr = cfg.lr;
    opt.weight_decay = cfg.weight_decay;

    DmStepOptions step_options;
    step_options.all_steps = cfg.all_steps;

    DmTrainResult result;
    result.losses.reserve(cfg.steps);
    for (int step = 0; step < cfg.steps; ++step) {
        std::vector<DmTrainSample> batch;
        batch.reserve(cfg.batch);
        for (int bidx = 0; bidx < cfg.batch; ++bidx) {
            const auto& x0 = dataset[static_cast<size_t>(
                rng.uniform_int(0, static_cast<int64_t>(dataset.size()) - 1))];
            MaskPattern mask = draw_mask(n, cfg, rng);
            double noise_var = 0.0;
            if (rng.uniform() >= cfg.clean_prob) {
                const double snr_db =
                    cfg.snr_db_min + (cfg.snr_db_max - cfg.snr_db_min) * rng.uniform();
                noise_var = model.entry_var / std::pow(10.0, snr_db / 10.0);
            }
            DmTrainSample s;
            s.cond_norm = scale_condition(extract_condition(x0, mask, n, m, noise_var, rng),
                                          inv_scale);
            s.x0_norm = x0 * inv_scale;
            batch.push_back(std::move(s));
        }
        result.losses.push_back(dm_train_step(model, batch, sched, rng, opt, step_options));
    }
    // smoothed final loss
    const size_t tail = std::min<size_t>(50, result.losses.size());
    double acc = 0.0;
    for (size_t i = result.losses.size() - tail; i < result.losses.size(); ++i)
        acc += result.losses[i];
    result.final_loss = acc / static_cast<double>(tail);
    return result;
}

std::vector<Vec> impute_csi_batch(DenoiserModel& model,
                                  const std::vector<Condition>& conds_raw,
                                  const NoiseSchedule& sched, Rng& rng) {
    const int n = model.cfg.elements;
    const int m = model.cfg.antennas;
    const int dim = 2 * n * m;
    const size_t b = conds_raw.size();
    require(b >= 1, "impute_csi_batch: empty batch");
    const double inv_scale = 1.0 / model.norm_scale;

    std::vector<Condition> conds(b);
    for (size_t i = 0; i < b; ++i) conds[i] = scale_condition(conds_raw[i], inv_scale);

    std::vector<Vec> x(b);
    for (size_t i = 0; i < b; ++i) {
        x[i].resize(dim);
        for (int j = 0; j < dim; ++j) x[i](j) = rng.normal();
    }

    std::vector<DenoiserInput> inputs(b);
    for (int k = sched.steps; k >= 1; --k) {
        for (size_t i = 0; i < b; ++i) {
            inputs[i].x_tokens = csi_tokens(x[i], n, m);
            inputs[i].cond = &conds[i];
            inputs[i].k = k;
        }
        Mat tokens = model.predict_noise_tokens(inputs);
        for (size_t i = 0; i < b; ++i) {
            Vec eps_hat = csi_from_tokens(tokens.middleRows(static_cast<Eigen::Index>(i) * n, n),
                                          n, m);
            x[i] = reverse_step(x[i], eps_hat, k, sched, rng);
            if (!x[i].allFinite())
                throw std::runtime_error("impute_csi: non-finite intermediate state");
        }
    }
    for (size_t i = 0; i < b; ++i) x[i] *= model.norm_scale;
    return x;
}

Vec impute_csi(DenoiserModel& model, const Condition& cond_raw, const NoiseSchedule& sched,
               Rng& rng) {
    return impute_csi_batch(model, {cond_raw}, sched, rng).front();
}

}  // namespace dedt
