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

#include "dedt/experts.hpp"

#include <cmath>

#include "dedt/trajectory.hpp"

namespace dedt {

namespace {

// One coordinate-ascent run from a given phase initialization.
struct SweepOutcome {
    Vec phases;
    double gain = 0.0;
    int sweeps = 0;
};

SweepOutcome coordinate_ascent(const CMat& h, Vec phases, const AoOptions& opt) {
    const int n = static_cast<int>(h.rows());
    Eigen::RowVectorXcd total = Eigen::RowVectorXcd::Zero(h.cols());
    std::vector<cplx> phi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        phi[static_cast<size_t>(i)] = cplx(std::cos(phases(i)), std::sin(phases(i)));
        total += phi[static_cast<size_t>(i)] * h.row(i);
    }
    double gain = total.squaredNorm();
    int sweep = 0;
    for (; sweep < opt.sweeps; ++sweep) {
        const double gain_before = gain;
        for (int i = 0; i < n; ++i) {
            Eigen::RowVectorXcd rest = total - phi[static_cast<size_t>(i)] * h.row(i);
            const cplx c = (h.row(i) * rest.adjoint())(0);  // H_n * v^H
            const double theta = -std::arg(c);
            phases(i) = theta;
            phi[static_cast<size_t>(i)] = cplx(std::cos(theta), std::sin(theta));
            total = rest + phi[static_cast<size_t>(i)] * h.row(i);
            if (opt.check_monotone) {
                const double updated = total.squaredNorm();
                require(updated >= gain - 1e-9 * std::max(1.0, gain),
                        "ao_optimize: objective decreased");
                gain = updated;
            }
        }
        const double gain_after = total.squaredNorm();
        gain = gain_after;
        if (gain_after - gain_before < opt.tol * std::max(1.0, gain_before)) {
            sweep += 1;
            break;
        }
    }
    SweepOutcome out;
    out.phases = std::move(phases);
    out.gain = gain;
    out.sweeps = sweep;
    return out;
}

// Dominant right singular direction of H via power iteration on H^H H.
CVec dominant_right_singular(const CMat& h) {
    const int m = static_cast<int>(h.cols());
    CMat gram = h.adjoint() * h;
    CVec w = CVec::Ones(m);
    w.normalize();
    for (int it = 0; it < 50; ++it) {
        CVec next = gram * w;
        const double norm = next.norm();
        if (norm == 0.0) return CVec::Ones(m).normalized();
        next /= norm;
        if ((next - w).norm() < 1e-12) {
            w = next;
            break;
        }
        w = next;
    }
    return w;
}

}  // namespace

AoResult ao_optimize(const CMat& cascaded, double tx_power, double noise_var,
                     const AoOptions& options, Rng* restart_rng) {
    require(options.sweeps >= 1, "ao_optimize: sweeps must be >= 1");
    const int n = static_cast<int>(cascaded.rows());

    // singular-direction-aligned initialization
    CVec w = dominant_right_singular(cascaded);
    Vec init(n);
    for (int i = 0; i < n; ++i) {
        const cplx c = (cascaded.row(i) * w)(0);
        init(i) = (std::abs(c) > 0.0) ? -std::arg(c) : 0.0;
    }
    SweepOutcome best = coordinate_ascent(cascaded, init, options);

    if (options.random_restarts > 0) {
        require(restart_rng != nullptr, "ao_optimize: restarts need an RNG");
        for (int r = 0; r < options.random_restarts; ++r) {
            Vec start = random_phases(n, *restart_rng);
            SweepOutcome candidate = coordinate_ascent(cascaded, start, options);
            if (candidate.gain > best.gain) best = candidate;
        }
    }

    AoResult result;
    result.phases = canonicalize_phases(best.phases);
    result.gain = best.gain;
    result.sweeps_used = best.sweeps;
    result.rate = mrt_rate(result.phases, cascaded, tx_power, noise_var);
    return result;
}

Vec random_phases(int n, Rng& rng) {
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double theta = (rng.uniform() * 2.0 - 1.0) * kPi;
        if (theta <= -kPi) theta = kPi;
        out(i) = theta;
    }
    return out;
}

Vec rc_impute(const Condition& cond, int n, int m, double fill_entry_var, Rng& rng) {
    Mat tokens = Mat::Zero(n, 2 * m);
    const double s = std::sqrt(fill_entry_var / 2.0);
    std::vector<bool> observed(static_cast<size_t>(n), false);
    for (int idx : cond.observed) observed[static_cast<size_t>(idx)] = true;
    for (int i = 0; i < n; ++i) {
        if (observed[static_cast<size_t>(i)]) {
            tokens.row(i) = cond.mirror.row(i);
        } else {
            for (int j = 0; j < 2 * m; ++j) tokens(i, j) = s * rng.normal();
        }
    }
    return csi_from_tokens(tokens, n, m);
}

}  // namespace dedt
