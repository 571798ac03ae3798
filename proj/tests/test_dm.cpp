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

#include <doctest.h>

#include "dedt/diffusion.hpp"

using namespace dedt;

TEST_CASE("noise schedule: endpoints, products, identities") {
    auto s = build_schedule(500, 1e-4, 0.02);
    CHECK(s.b_at(1) == doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(s.b_at(500) == doctest::Approx(0.02).epsilon(1e-15));
    for (int k = 2; k <= 500; ++k) CHECK(s.b_at(k) >= s.b_at(k - 1));
    for (int k = 2; k <= 500; ++k) CHECK(s.abar_at(k) < s.abar_at(k - 1));

    // independent product oracle
    auto s100 = build_schedule(100, 1e-4, 0.02);
    double prod = 1.0;
    for (int k = 1; k <= 100; ++k) {
        prod *= 1.0 - s100.b_at(k);
        CHECK(std::abs(s100.abar_at(k) - prod) < 1e-12);
        CHECK(s100.abar_at(k) ==
              doctest::Approx((1.0 - s100.b_at(k)) * s100.abar_at(k - 1)).epsilon(1e-15));
    }

    auto s1 = build_schedule(1, 0.3, 0.3);
    CHECK(s1.b_at(1) == 0.3);
    CHECK(s1.abar_at(1) == doctest::Approx(0.7).epsilon(1e-15));

    CHECK_THROWS(build_schedule(0, 1e-4, 0.02));
    CHECK_THROWS(build_schedule(10, 0.0, 0.02));
    CHECK_THROWS(build_schedule(10, 0.03, 0.02));
    CHECK_THROWS(build_schedule(10, 0.5, 1.0));
}

TEST_CASE("csi vectorization layout and round trip") {
    CMat zero = CMat::Zero(3, 2);
    CHECK(vectorize_csi(zero).cwiseAbs().maxCoeff() == 0.0);

    CMat one(1, 1);
    one(0, 0) = cplx(3.0, 4.0);
    Vec v = vectorize_csi(one);
    CHECK(v(0) == 3.0);
    CHECK(v(1) == 4.0);

    Rng rng(1);
    CMat h(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) h(i, j) = rng.cnormal();
    CMat back = devectorize_csi(vectorize_csi(h), 4, 2);
    CHECK((back - h).cwiseAbs().maxCoeff() == 0.0);

    // antenna-major stacking: x[m*N+n] = Re H(n,m)
    Vec x = vectorize_csi(h);
    CHECK(x(1 * 4 + 2) == h(2, 1).real());
    CHECK(8 + 1 * 4 + 2 < x.size());
    CHECK(x(8 + 1 * 4 + 2) == h(2, 1).imag());

    CHECK_THROWS(devectorize_csi(Vec::Zero(7), 4, 2));

    Mat tok = csi_tokens(x, 4, 2);
    CHECK(tok.rows() == 4);
    CHECK(tok.cols() == 4);
    CHECK(tok(2, 1) == h(2, 1).real());
    CHECK(tok(2, 3) == h(2, 1).imag());
    CHECK((csi_from_tokens(tok, 4, 2) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mask patterns") {
    Rng rng(3);
    auto m = random_mask(16, 8, rng);
    m.validate();
    CHECK(m.observed_count() == 8);
    CHECK(m.rho() == doctest::Approx(0.5));

    auto all = random_mask(16, 16, rng);
    CHECK(all.rho() == 0.0);
    auto none = random_mask(16, 0, rng);
    CHECK(none.rho() == 1.0);
    CHECK(none.observed.empty());

    auto g = grid_mask(16, 0.5);  // stride 2
    CHECK(g.observed_count() == 8);
    CHECK(g.observed[1] == 2);
    auto g1 = grid_mask(16, 1.0);
    CHECK(g1.observed.empty());
    auto g0 = grid_mask(16, 0.0);
    CHECK(g0.observed_count() == 16);
}

TEST_CASE("extract_condition: exactness, emptiness, noise power") {
    const int n = 8, m = 2;
    Rng rng(4);
    Vec x(2 * n * m);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal() * 0.7071067811865476;

    auto mask = random_mask(n, 5, rng);
    auto clean = extract_condition(x, mask, n, m, 0.0, rng);
    Mat full = csi_tokens(x, n, m);
    for (int r = 0; r < 5; ++r)
        CHECK((clean.tokens.row(r) - full.row(mask.observed[r])).cwiseAbs().maxCoeff() == 0.0);
    CHECK(clean.indicator.sum() == doctest::Approx(5.0));

    MaskPattern everything_masked;
    everything_masked.total = n;
    auto none = extract_condition(x, everything_masked, n, m, 0.0, rng);
    CHECK(none.tokens.rows() == 0);
    CHECK(none.indicator.cwiseAbs().maxCoeff() == 0.0);
    CHECK(none.mirror.cwiseAbs().maxCoeff() == 0.0);

    // est_noise_var = 0.1 (10 dB against unit-variance complex entries):
    // per-token error power per complex entry averages 0.1
    const double var = 0.1;
    double acc = 0.0;
    int count = 0;
    auto obs_all = random_mask(n, n, rng);
    for (int rep = 0; rep < 10000 / n; ++rep) {
        auto c = extract_condition(x, obs_all, n, m, var, rng);
        for (int r = 0; r < n; ++r) {
            acc += (c.tokens.row(r) - full.row(r)).squaredNorm() / m;
            count += 1;
        }
    }
    CHECK(acc / count == doctest::Approx(var).epsilon(0.1));
}

TEST_CASE("forward diffusion marginal matches composed single steps") {
    auto sched = build_schedule(20, 1e-3, 0.08);
    const int dim = 16;

    Vec x0 = Vec::Constant(dim, 1.5);
    Vec zero = Vec::Zero(dim);
    CHECK((forward_diffuse(x0, 5, zero, sched) - std::sqrt(sched.abar_at(5)) * x0)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    Rng r0(9);
    Vec eps(dim);
    for (int i = 0; i < dim; ++i) eps(i) = r0.normal();
    CHECK((forward_diffuse(zero, 7, eps, sched) - std::sqrt(1.0 - sched.abar_at(7)) * eps)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK_THROWS(forward_diffuse(x0, 0, eps, sched));
    CHECK_THROWS(forward_diffuse(x0, 21, eps, sched));

    // variance of the chained process matches abar_k*var(x0) + (1-abar_k)
    Rng rng(10);
    const double x0_var = 4.0;
    for (int k_target : {10, 20}) {
        double acc = 0.0;
        int cnt = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            Vec x(dim);
            for (int i = 0; i < dim; ++i) x(i) = 2.0 * rng.normal();
            for (int k = 1; k <= k_target; ++k) {
                const double bk = sched.b_at(k);
                for (int i = 0; i < dim; ++i)
                    x(i) = std::sqrt(1.0 - bk) * x(i) + std::sqrt(bk) * rng.normal();
            }
            acc += x.squaredNorm();
            cnt += dim;
        }
        const double expected = sched.abar_at(k_target) * x0_var + (1.0 - sched.abar_at(k_target));
        CHECK(acc / cnt == doctest::Approx(expected).epsilon(0.03));
    }
}

TEST_CASE("reverse step: inversion, rescale, injected variance") {
    auto sched = build_schedule(50, 1e-4, 0.05);
    const int dim = 32;
    Rng rng(11);

    // k = 1 with the true noise recovers x0 exactly
    Vec x0(dim), eps(dim);
    for (int i = 0; i < dim; ++i) {
        x0(i) = rng.normal() * 2.0;
        eps(i) = rng.normal();
    }
    Vec x1 = forward_diffuse(x0, 1, eps, sched);
    Vec rec = reverse_step(x1, eps, 1, sched, rng);
    CHECK((rec - x0).cwiseAbs().maxCoeff() < 1e-10);

    // zero prediction at k = 1 is a pure rescale
    Vec pure = reverse_step(x1, Vec::Zero(dim), 1, sched, rng);
    CHECK((pure - x1 / std::sqrt(1.0 - sched.b_at(1))).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS(reverse_step(x1, eps, 0, sched, rng));
    CHECK_THROWS(reverse_step(x1, eps, 51, sched, rng));

    // injected-noise variance matches sigma_sq(k) within 5%
    const int k = 30;
    Vec xk = forward_diffuse(x0, k, eps, sched);
    Vec mean_out = (xk - (sched.b_at(k) / std::sqrt(1.0 - sched.abar_at(k))) * eps) /
                   std::sqrt(1.0 - sched.b_at(k));
    double acc = 0.0;
    int cnt = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Vec out = reverse_step(xk, eps, k, sched, rng);
        acc += (out - mean_out).squaredNorm();
        cnt += dim;
    }
    CHECK(acc / cnt == doctest::Approx(sched.sigma_sq(k)).epsilon(0.05));
}

TEST_CASE("denoiser: shape, determinism, condition order invariance, empty condition") {
    DenoiserConfig cfg;
    cfg.elements = 16;
    cfg.antennas = 2;
    cfg.width = 32;
    cfg.heads = 4;
    cfg.self_blocks = 2;
    DenoiserModel model(cfg, 77);

    const int dim = 2 * 16 * 2;
    Rng rng(12);
    Vec xk(dim);
    for (int i = 0; i < dim; ++i) xk(i) = rng.normal();
    Vec xtrue(dim);
    for (int i = 0; i < dim; ++i) xtrue(i) = rng.normal();

    auto mask = random_mask(16, 8, rng);
    auto cond = extract_condition(xtrue, mask, 16, 2, 0.0, rng);

    Vec out1 = denoiser_forward(model, xk, cond, 10);
    CHECK(out1.size() == 64);
    CHECK(out1.allFinite());
    Vec out2 = denoiser_forward(model, xk, cond, 10);
    CHECK((out1 - out2).cwiseAbs().maxCoeff() == 0.0);

    // permute condition token order together with the observed-index list
    Condition permuted = cond;
    const int np = cond.tokens.rows();
    for (int r = 0; r < np; ++r) {
        permuted.tokens.row(r) = cond.tokens.row(np - 1 - r);
        permuted.observed[r] = cond.observed[np - 1 - r];
    }
    Vec out3 = denoiser_forward(model, xk, permuted, 10);
    CHECK((out3 - out1).cwiseAbs().maxCoeff() < 1e-6);

    // fully masked input still produces a finite prediction
    MaskPattern nothing;
    nothing.total = 16;
    auto empty_cond = extract_condition(xtrue, nothing, 16, 2, 0.0, rng);
    Vec out4 = denoiser_forward(model, xk, empty_cond, 10);
    CHECK(out4.size() == 64);
    CHECK(out4.allFinite());

    // different step index changes the prediction
    Vec out5 = denoiser_forward(model, xk, cond, 11);
    CHECK((out5 - out1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("diffusion loss: floor at zero, chi-square mean for a zero predictor") {
    std::vector<Vec> eps = {Vec::Random(8), Vec::Random(8)};
    CHECK(diffusion_batch_loss(eps, eps) == 0.0);

    DenoiserConfig cfg;
    cfg.elements = 16;
    cfg.antennas = 2;
    cfg.width = 32;
    DenoiserModel model(cfg, 5);
    // zero the output head so eps_hat is exactly zero
    model.params.at("out.w").value.setZero();
    model.params.at("out.b").value.setZero();

    auto sched = build_schedule(100, 1e-4, 0.02);
    Rng rng(13);
    std::vector<DmTrainSample> batch;
    for (int i = 0; i < 64; ++i) {
        DmTrainSample s;
        s.x0_norm = Vec::Zero(64);
        for (int j = 0; j < 64; ++j) s.x0_norm(j) = rng.normal();
        auto mask = random_mask(16, 8, rng);
        s.cond_norm = extract_condition(s.x0_norm, mask, 16, 2, 0.0, rng);
        batch.push_back(std::move(s));
    }
    nn::AdamW opt;
    opt.lr = 0.0;  // measure the loss without moving the parameters
    double loss = dm_train_step(model, batch, sched, rng, opt);
    CHECK(loss == doctest::Approx(64.0).epsilon(0.12));
}

TEST_CASE("nmse basics") {
    Vec t(4);
    t << 1, 2, 3, 4;
    CHECK(nmse(t, t) == 0.0);
    CHECK(nmse(Vec::Zero(4), t) == doctest::Approx(1.0));
    CHECK(nmse(2.0 * t, t) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nmse(t, Vec::Zero(4)), std::domain_error);
}

TEST_CASE("impute determinism and shape") {
    DenoiserConfig cfg;
    cfg.elements = 8;
    cfg.antennas = 1;
    cfg.width = 16;
    cfg.heads = 2;
    cfg.self_blocks = 1;
    DenoiserModel model(cfg, 21);
    auto sched = build_schedule(10, 1e-3, 0.05);

    Rng rng(14);
    Vec xtrue(16);
    for (int i = 0; i < 16; ++i) xtrue(i) = rng.normal();
    auto mask = random_mask(8, 4, rng);
    auto cond = extract_condition(xtrue, mask, 8, 1, 0.0, rng);

    Rng ra(99), rb(99);
    Vec xa = impute_csi(model, cond, sched, ra);
    Vec xb = impute_csi(model, cond, sched, rb);
    CHECK(xa.size() == 16);
    CHECK((xa - xb).cwiseAbs().maxCoeff() == 0.0);
}
