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

#include "dedt/common.hpp"
#include "dedt/correlation.hpp"
#include "dedt/geometry.hpp"
#include "dedt/rng.hpp"

namespace dedt {

/// One slot's channels: BS->RIS matrix G (N x M), RIS->user vector h (N),
/// and the cascaded channel H = diag(h^H) * G, i.e.
/// H[n,m] = conj(h[n]) * G[n,m].
struct ChannelRealization {
    CMat G;
    CVec h;
    CMat H;
};

/// Draw one slot: column m of G is CN(0, sigma_area*mu_m*R), h is
/// CN(0, sigma_area*mu_0*R), independent of G; H formed by the cascade rule.
ChannelRealization sample_slot(const EnvConfig& env, const CorrelationMatrix& corr, Rng& rng);

/// Empirical normalized correlation of cascaded-channel entries, pooled
/// over antennas: estimate of E[H[i,m]*conj(H[l,m])] normalized to unit
/// diagonal. For independent h and G this converges to R[i,l]^2.
Mat cascaded_correlation_stat(const EnvConfig& env, const CorrelationMatrix& corr,
                              int64_t slots, Rng& rng);

/// Achievable downlink rate log2(1 + P*||phi^T H||^2 / noise_var) under the
/// maximum-ratio transmit precoder, with phi_n = exp(j*phases[n]). The
/// optimal precoder itself is never formed here; see mrt_precoder.
double mrt_rate(const Vec& phases, const CMat& cascaded, double tx_power, double noise_var);

/// The maximum-ratio precoder f* = sqrt(P) * (phi^T H)^H / ||phi^T H||
/// realizing the rate above; exposed only for debugging/verification.
CVec mrt_precoder(const Vec& phases, const CMat& cascaded, double tx_power);

}  // namespace dedt
