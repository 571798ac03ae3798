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

#include <cstdint>
#include <vector>

#include "dedt/common.hpp"

namespace dedt {

/// Rectangular RIS panel in the yz-plane.
///
/// Element indexing is 0-based throughout the project: element i sits at
/// grid row n1 = i / N2 and grid column n2 = i % N2, i.e. i = n1*N2 + n2,
/// with position [0, n1*d1, n2*d2].
struct RisGeometry {
    int n1 = 1;          ///< elements per column (grid rows)
    int n2 = 1;          ///< elements per row (grid columns)
    double d1 = 0.0;     ///< vertical element spacing [m]
    double d2 = 0.0;     ///< horizontal element spacing [m]
    double wavelength = 0.0;  ///< carrier wavelength [m]

    int elements() const { return n1 * n2; }
    int row_of(int i) const { return i / n2; }
    int col_of(int i) const { return i % n2; }
    double element_area() const { return d1 * d2; }

    void validate() const {
        require(n1 >= 1 && n2 >= 1, "RisGeometry: element counts must be >= 1");
        require(d1 > 0.0 && d2 > 0.0, "RisGeometry: spacings must be positive");
        require(wavelength > 0.0, "RisGeometry: wavelength must be positive");
    }
};

/// One wireless scenario: panel geometry plus link-budget parameters.
/// sigma_area (the element area d1*d2) and noise_var are kept strictly
/// apart; neither is ever referred to by a bare "sigma".
struct EnvConfig {
    RisGeometry geometry;
    int bs_antennas = 1;            ///< M
    std::vector<double> mu_m;       ///< per-antenna average intensity attenuation, length M
    double mu_0 = 0.5;              ///< RIS-user average intensity attenuation
    double tx_power = 1.0;          ///< P, linear watts
    double noise_var = 1e-6;        ///< receiver noise variance, linear watts
    int slots_per_episode = 20;     ///< T
    uint64_t seed = 1;

    double sigma_area() const { return geometry.element_area(); }

    void validate() const {
        geometry.validate();
        require(bs_antennas >= 1, "EnvConfig: M must be >= 1");
        require(static_cast<int>(mu_m.size()) == bs_antennas,
                "EnvConfig: mu_m length must equal M");
        for (double m : mu_m) require(m >= 0.0, "EnvConfig: attenuations must be non-negative");
        require(mu_0 >= 0.0, "EnvConfig: mu_0 must be non-negative");
        require(tx_power > 0.0, "EnvConfig: P must be positive");
        require(noise_var > 0.0, "EnvConfig: noise variance must be positive");
        require(slots_per_episode >= 1, "EnvConfig: T must be >= 1");
    }
};

}  // namespace dedt
