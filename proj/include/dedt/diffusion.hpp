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

#include "dedt/denoiser.hpp"
#include "dedt/schedule.hpp"

namespace dedt {

/// x_k = sqrt(abar_k) * x0 + sqrt(1 - abar_k) * eps.
Vec forward_diffuse(const Vec& x0, int k, const Vec& eps, const NoiseSchedule& sched);

/// One reverse update:
///   x_{k-1} = (x_k - (b_k / sqrt(1-abar_k)) * eps_hat) / sqrt(1-b_k)
///             + sqrt(sigma_sq(k)) * z,
/// with z standard normal, omitted at k = 1 (deterministic final step).
Vec reverse_step(const Vec& x_k, const Vec& eps_hat, int k, const NoiseSchedule& sched,
                 Rng& rng);

/// Single-sample noise prediction in normalized units. The condition must be
/// normalized by the same scale as x_k.
Vec denoiser_forward(DenoiserModel& model, const Vec& x_k, const Condition& cond, int k);

/// Scales condition tokens and mirror into normalized units.
Condition scale_condition(const Condition& cond, double inv_scale);

/// Mean over the batch of ||eps - eps_hat||^2 (the simplified training
/// objective; the schedule-dependent weights are dropped).
double diffusion_batch_loss(const std::vector<Vec>& eps, const std::vector<Vec>& eps_hat);

struct DmTrainSample {
    Vec x0_norm;          ///< normalized clean vector
    Condition cond_norm;  ///< normalized condition
};

struct DmStepOptions {
    bool all_steps = false;  ///< loop every diffusion step per sample instead of
                             ///< drawing k uniformly (same expected gradient)
};

/// One optimizer update on a batch; returns the pre-update loss.
double dm_train_step(DenoiserModel& model, const std::vector<DmTrainSample>& batch,
                     const NoiseSchedule& sched, Rng& rng, const nn::AdamW& opt,
                     const DmStepOptions& options = {});

struct DmTrainConfig {
    int steps = 4000;
    int batch = 32;
    double lr = 1e-4;
    double weight_decay = 1e-4;
    double rho_min = 0.0;      ///< mask ratio range sampled per training example
    double rho_max = 0.95;
    bool grid_mask_mode = false;
    double snr_db_min = 0.0;   ///< estimation-noise range sampled per example
    double snr_db_max = 30.0;
    double clean_prob = 0.25;  ///< probability of a noiseless condition
    bool all_steps = false;
    int log_every = 500;
};

struct DmTrainResult {
    std::vector<double> losses;
    double final_loss = 0.0;
};

/// Trains in place on a dataset of raw CSI vectors. Sets the model's
/// normalization scale and per-entry signal variance from the data on the
/// first call.
DmTrainResult train_dm(DenoiserModel& model, const NoiseSchedule& sched,
                       const std::vector<Vec>& dataset, const DmTrainConfig& cfg, Rng& rng);

/// Reverse-chain imputation for a batch of conditions (raw units in, raw
/// units out). Deterministic given the RNG state.
std::vector<Vec> impute_csi_batch(DenoiserModel& model,
                                  const std::vector<Condition>& conds_raw,
                                  const NoiseSchedule& sched, Rng& rng);
Vec impute_csi(DenoiserModel& model, const Condition& cond_raw, const NoiseSchedule& sched,
               Rng& rng);

}  // namespace dedt
