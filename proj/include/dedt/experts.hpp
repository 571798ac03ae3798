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

#include "dedt/channel.hpp"
#include "dedt/csi.hpp"

namespace dedt {

struct AoResult {
    Vec phases;           ///< globally phase-normalized: phases(0) == 0
    double rate = 0.0;    ///< achieved mrt_rate
    double gain = 0.0;    ///< converged ||phi^T H||^2
    int sweeps_used = 0;
};

struct AoOptions {
    int sweeps = 50;
    double tol = 1e-12;     ///< stop when a full sweep improves the gain less
    int random_restarts = 0;  ///< extra random initializations on top of the
                              ///< singular-vector one; best result wins
    bool check_monotone = false;  ///< assert the objective never decreases
};

/// Coordinate-ascent phase optimizer. Each element update applies the
/// closed-form per-coordinate maximizer theta_n = -arg(H_n * v^H) against
/// the residual v of the remaining elements, so the objective ||phi^T H||^2
/// is non-decreasing at every update.
AoResult ao_optimize(const CMat& cascaded, double tx_power, double noise_var,
                     const AoOptions& options = {}, Rng* restart_rng = nullptr);

/// Uniform phases on (-pi, pi]^N.
Vec random_phases(int n, Rng& rng);

/// Random-channel imputation baseline: observed entries are copied through,
/// masked element rows are filled with independent complex Gaussian draws
/// of per-complex-entry variance fill_entry_var (no spatial structure).
Vec rc_impute(const Condition& cond, int n, int m, double fill_entry_var, Rng& rng);

}  // namespace dedt
