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

#include "dedt/correlation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dedt {

namespace {

constexpr double kPsdTolerance = 1e-10;

// Cholesky-style factorization that tolerates (clamped) zero eigenvalues.
// Rank-deficient columns come out as zero columns, which is exactly what a
// perfectly-correlated pair of elements needs for sampling.
Mat semidefinite_factor(const Mat& r) {
    const Eigen::Index n = r.rows();
    Mat l = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = r(j, j) - l.row(j).head(j).squaredNorm();
        if (d < 1e-12) {
            l(j, j) = 0.0;
            continue;
        }
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = r(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

}  // namespace

CorrelationMatrix build_correlation(const RisGeometry& geometry) {
    geometry.validate();
    const int n = geometry.elements();
    Mat r(n, n);
    const double scale = 2.0 * kPi * geometry.d2 / geometry.wavelength;
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l <= i; ++l) {
            const int offset = geometry.col_of(i) - geometry.col_of(l);
            const double v = sinc(scale * static_cast<double>(offset));
            r(i, l) = v;
            r(l, i) = v;
        }
    }

    Eigen::SelfAdjointEigenSolver<Mat> eig(r);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("correlation eigendecomposition failed");
    Vec lambda = eig.eigenvalues();
    if (lambda.minCoeff() < -kPsdTolerance)
        throw std::runtime_error("correlation not PSD");
    bool clamped = false;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) < 0.0) {
            lambda(k) = 0.0;
            clamped = true;
        }
    }
    Mat r_psd = r;
    if (clamped) {
        r_psd = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
        r_psd = 0.5 * (r_psd + r_psd.transpose());
    }

    CorrelationMatrix out;
    out.R = r;
    out.factor = semidefinite_factor(r_psd);
    return out;
}

MonteCarloCorrelation monte_carlo_correlation(const RisGeometry& geometry,
                                              int64_t samples, uint64_t seed) {
    geometry.validate();
    require(samples >= 1, "monte_carlo_correlation: samples must be >= 1");
    const int n = geometry.elements();
    const double k0 = 2.0 * kPi / geometry.wavelength;

    Rng rng(seed);
    CMat acc = CMat::Zero(n, n);
    CVec gamma(n);
    for (int64_t s = 0; s < samples; ++s) {
        const double alpha = (rng.uniform() - 0.5) * kPi;           // uniform azimuth
        const double beta = std::asin(2.0 * rng.uniform() - 1.0);   // cos-weighted elevation
        const double qy = k0 * std::sin(alpha) * std::cos(beta);
        const double qz = k0 * std::sin(beta);
        for (int i = 0; i < n; ++i) {
            const double phase = qy * geometry.row_of(i) * geometry.d1 +
                                 qz * geometry.col_of(i) * geometry.d2;
            gamma(i) = cplx(std::cos(phase), std::sin(phase));
        }
        acc.noalias() += gamma * gamma.adjoint();
    }
    acc /= static_cast<double>(samples);

    MonteCarloCorrelation out;
    out.real_part = acc.real();
    out.imag_part = acc.imag();
    return out;
}

double isotropic_correlation_exact(const RisGeometry& geometry, int dn1, int dn2) {
    const double dy = dn1 * geometry.d1;
    const double dz = dn2 * geometry.d2;
    const double dist = std::sqrt(dy * dy + dz * dz);
    return sinc(2.0 * kPi * dist / geometry.wavelength);
}

CVec sample_correlated_vector(const CorrelationMatrix& corr, double variance, Rng& rng) {
    if (variance < 0.0) throw std::domain_error("sample_correlated_vector: negative variance");
    const Eigen::Index n = corr.factor.rows();
    CVec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.cnormal();
    return std::sqrt(variance) * (corr.factor * z);
}

}  // namespace dedt
