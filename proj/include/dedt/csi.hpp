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
#include "dedt/rng.hpp"

namespace dedt {

/// Real-valued CSI layout: x = [Re(vec(H)); Im(vec(H))] with vec stacking H
/// column-by-column (antenna-major), so x[m*N + n] = Re(H(n,m)) and
/// x[N*M + m*N + n] = Im(H(n,m)).
Vec vectorize_csi(const CMat& h);
CMat devectorize_csi(const Vec& x, int n, int m);

/// Per-element token view of a CSI vector: row n holds
/// [Re H(n,0..M-1), Im H(n,0..M-1)], i.e. width 2M.
Mat csi_tokens(const Vec& x, int n, int m);
Vec csi_from_tokens(const Mat& tokens, int n, int m);

/// Which RIS elements are observed. rho = 1 - observed/N.
struct MaskPattern {
    std::vector<int> observed;  ///< sorted unique element indices
    int total = 0;              ///< N

    int observed_count() const { return static_cast<int>(observed.size()); }
    double rho() const {
        return 1.0 - static_cast<double>(observed.size()) / static_cast<double>(total);
    }
    void validate() const;
};

/// Uniformly random subset of `count` observed elements.
MaskPattern random_mask(int total, int count, Rng& rng);
/// Deterministic pattern: every ceil(1/(1-rho))-th element observed.
MaskPattern grid_mask(int total, double rho);

/// Noisy observation of the observed elements' tokens plus the mirror/
/// indicator channels the denoiser consumes. Estimation noise is complex
/// circularly-symmetric with variance est_noise_var per complex entry
/// (split evenly across real and imaginary parts).
struct Condition {
    Mat tokens;               ///< observed_count x 2M noisy tokens
    std::vector<int> observed;
    Vec indicator;            ///< length N, 1 = observed
    Mat mirror;               ///< N x 2M: noisy tokens at observed rows, zero elsewhere
};

Condition extract_condition(const Vec& x_true, const MaskPattern& mask, int n, int m,
                            double est_noise_var, Rng& rng);

/// ||x_hat - x_true||^2 / ||x_true||^2.
double nmse(const Vec& x_hat, const Vec& x_true);

}  // namespace dedt
