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

namespace dedt {

/// Per-step diffusion noise variances b_1..b_K and their running products
/// abar_k = prod_{i<=k} (1 - b_i), with abar_0 = 1. Step indices are
/// 1-based to match the forward/reverse recursions.
struct NoiseSchedule {
    int steps = 0;
    std::vector<double> b;      ///< b[k-1] is the step-k variance
    std::vector<double> a_bar;  ///< a_bar[k-1] is abar_k

    double b_at(int k) const { return b.at(static_cast<size_t>(k) - 1); }
    double abar_at(int k) const {
        return k == 0 ? 1.0 : a_bar.at(static_cast<size_t>(k) - 1);
    }
    /// Reverse-step noise variance ((1-abar_{k-1})/(1-abar_k)) * b_k.
    double sigma_sq(int k) const {
        return (1.0 - abar_at(k - 1)) / (1.0 - abar_at(k)) * b_at(k);
    }
};

/// Linear schedule from b_first to b_last over K steps.
inline NoiseSchedule build_schedule(int steps, double b_first, double b_last) {
    require(steps >= 1, "build_schedule: K must be >= 1");
    require(b_first > 0.0 && b_first <= b_last && b_last < 1.0,
            "build_schedule: need 0 < b_first <= b_last < 1");
    NoiseSchedule s;
    s.steps = steps;
    s.b.resize(steps);
    s.a_bar.resize(steps);
    double prod = 1.0;
    for (int k = 0; k < steps; ++k) {
        double t = (steps == 1) ? 0.0 : static_cast<double>(k) / (steps - 1);
        s.b[k] = b_first + t * (b_last - b_first);
        prod *= 1.0 - s.b[k];
        s.a_bar[k] = prod;
    }
    return s;
}

}  // namespace dedt
