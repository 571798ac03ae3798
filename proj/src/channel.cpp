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

#include "dedt/channel.hpp"

#include <cmath>

namespace dedt {

ChannelRealization sample_slot(const EnvConfig& env, const CorrelationMatrix& corr, Rng& rng) {
    env.validate();
    const int n = env.geometry.elements();
    const int m = env.bs_antennas;
    require(corr.R.rows() == n, "sample_slot: correlation does not match geometry");

    ChannelRealization out;
    out.G.resize(n, m);
    const double area = env.sigma_area();
    for (int col = 0; col < m; ++col)
        out.G.col(col) = sample_correlated_vector(corr, area * env.mu_m[col], rng);
    out.h = sample_correlated_vector(corr, area * env.mu_0, rng);

    out.H.resize(n, m);
    for (int i = 0; i < n; ++i)
        out.H.row(i) = std::conj(out.h(i)) * out.G.row(i);
    return out;
}

Mat cascaded_correlation_stat(const EnvConfig& env, const CorrelationMatrix& corr,
                              int64_t slots, Rng& rng) {
    require(slots >= 2, "cascaded_correlation_stat: slots must be >= 2");
    const int n = env.geometry.elements();
    CMat acc = CMat::Zero(n, n);
    for (int64_t s = 0; s < slots; ++s) {
        ChannelRealization slot = sample_slot(env, corr, rng);
        for (int m = 0; m < env.bs_antennas; ++m)
            acc.noalias() += slot.H.col(m) * slot.H.col(m).adjoint();
    }
    Mat c = acc.real();
    Vec d = c.diagonal().cwiseSqrt();
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) out(i, l) = c(i, l) / (d(i) * d(l));
    return out;
}

namespace {

Eigen::RowVectorXcd effective_row(const Vec& phases, const CMat& cascaded) {
    require(phases.size() == cascaded.rows(), "phase vector length must equal element count");
    Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(cascaded.cols());
    for (Eigen::Index i = 0; i < cascaded.rows(); ++i) {
        const cplx phi(std::cos(phases(i)), std::sin(phases(i)));
        acc += phi * cascaded.row(i);
    }
    return acc;
}

}  // namespace

double mrt_rate(const Vec& phases, const CMat& cascaded, double tx_power, double noise_var) {
    require(tx_power > 0.0 && noise_var > 0.0, "mrt_rate: P and noise variance must be positive");
    if (!cascaded.allFinite()) throw std::domain_error("mrt_rate: non-finite channel entries");
    const double gain = effective_row(phases, cascaded).squaredNorm();
    return std::log2(1.0 + tx_power * gain / noise_var);
}

CVec mrt_precoder(const Vec& phases, const CMat& cascaded, double tx_power) {
    Eigen::RowVectorXcd row = effective_row(phases, cascaded);
    const double norm = row.norm();
    if (norm == 0.0) return CVec::Zero(cascaded.cols());
    return std::sqrt(tx_power) * row.adjoint() / norm;
}

}  // namespace dedt
