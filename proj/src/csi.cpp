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

#include "dedt/csi.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dedt {

Vec vectorize_csi(const CMat& h) {
    const Eigen::Index n = h.rows(), m = h.cols();
    Vec x(2 * n * m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
            x(c * n + r) = h(r, c).real();
            x(n * m + c * n + r) = h(r, c).imag();
        }
    return x;
}

CMat devectorize_csi(const Vec& x, int n, int m) {
    require(x.size() == 2 * n * m, "devectorize_csi: length must be 2*N*M");
    CMat h(n, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < n; ++r)
            h(r, c) = cplx(x(c * n + r), x(n * m + c * n + r));
    return h;
}

Mat csi_tokens(const Vec& x, int n, int m) {
    require(x.size() == 2 * n * m, "csi_tokens: length must be 2*N*M");
    Mat t(n, 2 * m);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) {
            t(r, c) = x(c * n + r);
            t(r, m + c) = x(n * m + c * n + r);
        }
    return t;
}

Vec csi_from_tokens(const Mat& tokens, int n, int m) {
    require(tokens.rows() == n && tokens.cols() == 2 * m,
            "csi_from_tokens: token shape mismatch");
    Vec x(2 * n * m);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) {
            x(c * n + r) = tokens(r, c);
            x(n * m + c * n + r) = tokens(r, m + c);
        }
    return x;
}

void MaskPattern::validate() const {
    require(total >= 1, "MaskPattern: total must be >= 1");
    std::set<int> seen;
    for (int i : observed) {
        require(i >= 0 && i < total, "MaskPattern: index out of range");
        require(seen.insert(i).second, "MaskPattern: duplicate index");
    }
    require(std::is_sorted(observed.begin(), observed.end()),
            "MaskPattern: indices must be sorted");
}

MaskPattern random_mask(int total, int count, Rng& rng) {
    require(count >= 0 && count <= total, "random_mask: count out of range");
    std::vector<int> all(total);
    for (int i = 0; i < total; ++i) all[i] = i;
    // partial Fisher-Yates
    for (int i = 0; i < count; ++i) {
        int j = static_cast<int>(rng.uniform_int(i, total - 1));
        std::swap(all[i], all[j]);
    }
    MaskPattern m;
    m.total = total;
    m.observed.assign(all.begin(), all.begin() + count);
    std::sort(m.observed.begin(), m.observed.end());
    return m;
}

MaskPattern grid_mask(int total, double rho) {
    require(rho >= 0.0 && rho <= 1.0, "grid_mask: rho must be in [0,1]");
    MaskPattern m;
    m.total = total;
    if (rho < 1.0) {
        int stride = static_cast<int>(std::ceil(1.0 / (1.0 - rho)));
        for (int i = 0; i < total; i += stride) m.observed.push_back(i);
    }
    return m;
}

Condition extract_condition(const Vec& x_true, const MaskPattern& mask, int n, int m,
                            double est_noise_var, Rng& rng) {
    require(est_noise_var >= 0.0, "extract_condition: negative noise variance");
    mask.validate();
    require(mask.total == n, "extract_condition: mask size mismatch");
    Mat full = csi_tokens(x_true, n, m);
    const double s = std::sqrt(est_noise_var / 2.0);

    Condition c;
    c.observed = mask.observed;
    c.indicator = Vec::Zero(n);
    c.tokens.resize(mask.observed_count(), 2 * m);
    c.mirror = Mat::Zero(n, 2 * m);
    for (int r = 0; r < mask.observed_count(); ++r) {
        const int e = mask.observed[static_cast<size_t>(r)];
        c.indicator(e) = 1.0;
        for (int j = 0; j < 2 * m; ++j) c.tokens(r, j) = full(e, j) + s * rng.normal();
        c.mirror.row(e) = c.tokens.row(r);
    }
    return c;
}

double nmse(const Vec& x_hat, const Vec& x_true) {
    require(x_hat.size() == x_true.size(), "nmse: length mismatch");
    const double denom = x_true.squaredNorm();
    if (denom == 0.0) throw std::domain_error("nmse: zero-norm reference");
    return (x_hat - x_true).squaredNorm() / denom;
}

}  // namespace dedt
