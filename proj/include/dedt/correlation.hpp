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
#include "dedt/geometry.hpp"
#include "dedt/rng.hpp"

namespace dedt {

/// Spatial correlation of the RIS channel model together with a
/// lower-triangular factor L (L*L^T = R) used for sampling. Immutable after
/// construction and safe to share across threads.
struct CorrelationMatrix {
    Mat R;       ///< N x N, symmetric, unit diagonal, PSD after clamp
    Mat factor;  ///< lower-triangular L with L*L^T = R
};

/// Closed-form correlation used by the channel generator: entry (i,l) is
/// sinc(2*pi*d2*(n2-m2)/lambda), a function of the horizontal (column)
/// offset only. Eigenvalues below -1e-10 raise std::runtime_error
/// ("correlation not PSD"); values in [-1e-10, 0) are clamped to zero
/// before the semidefinite factorization.
CorrelationMatrix build_correlation(const RisGeometry& geometry);

/// Angle-sampled estimate of the correlation E[gamma * gamma^H] where gamma
/// is the array response over the full element grid and arrival directions
/// follow the hemisphere density cos(beta)/(2*pi) (alpha uniform, beta by
/// inverse CDF: beta = arcsin(2u-1)). Real and imaginary parts are returned
/// separately so tests can assert the imaginary residue.
struct MonteCarloCorrelation {
    Mat real_part;
    Mat imag_part;
};
MonteCarloCorrelation monte_carlo_correlation(const RisGeometry& geometry,
                                              int64_t samples, uint64_t seed);

/// Exact value of the angle-averaged correlation for an element pair at
/// grid offsets (dn1, dn2): the full-distance sinc law
/// sinc(2*pi*sqrt((dn1*d1)^2 + (dn2*d2)^2)/lambda). Reference used by the
/// oracle's own unit tests; the generator above intentionally keeps only
/// the horizontal term.
double isotropic_correlation_exact(const RisGeometry& geometry, int dn1, int dn2);

/// Draw x = sqrt(variance) * L * z with z i.i.d. CN(0,1) (real and
/// imaginary parts each N(0, 1/2)), so that E[x x^H] = variance * R.
CVec sample_correlated_vector(const CorrelationMatrix& corr, double variance, Rng& rng);

}  // namespace dedt
