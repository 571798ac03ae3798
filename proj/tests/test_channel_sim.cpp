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

#include "dedt/channel.hpp"
#include "dedt/correlation.hpp"

using namespace dedt;

namespace {

RisGeometry grid(int n1, int n2, double d_over_lambda, double lambda = 0.1) {
    RisGeometry g;
    g.n1 = n1;
    g.n2 = n2;
    g.d1 = d_over_lambda * lambda;
    g.d2 = d_over_lambda * lambda;
    g.wavelength = lambda;
    return g;
}

EnvConfig small_env(int n1, int n2, int m, double d_over_lambda = 0.25) {
    EnvConfig env;
    env.geometry = grid(n1, n2, d_over_lambda);
    env.bs_antennas = m;
    env.mu_m.assign(m, 0.5);
    env.mu_0 = 0.5;
    env.tx_power = 1.0;
    env.noise_var = 1e-6;
    env.slots_per_episode = 10;
    return env;
}

}  // namespace

TEST_CASE("correlation closed form: exact sinc identities") {
    auto c = build_correlation(grid(2, 4, 0.5));
    // unit diagonal
    for (int i = 0; i < 8; ++i) CHECK(c.R(i, i) == doctest::Approx(1.0).epsilon(1e-14));
    // half-wavelength horizontal neighbours decorrelate exactly
    CHECK(std::abs(c.R(0, 1)) < 1e-12);

    auto q = build_correlation(grid(2, 4, 0.25));
    CHECK(q.R(0, 1) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    // same column offset, different rows: the closed form keeps only the
    // horizontal term, so the value is exactly 1 regardless of row offset
    CHECK(q.R(0, 4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.R(1, 5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("correlation properties over the geometry grid") {
    for (int n1 : {1, 2, 4, 8}) {
        for (int n2 : {1, 2, 4, 8}) {
            for (double spacing : {0.1, 0.25, 0.5, 1.0}) {
                auto g = grid(n1, n2, spacing);
                auto c = build_correlation(g);
                const int n = g.elements();
                REQUIRE(c.R.rows() == n);
                CHECK((c.R - c.R.transpose()).cwiseAbs().maxCoeff() == 0.0);
                for (int i = 0; i < n; ++i) CHECK(c.R(i, i) == 1.0);
                // entries depend only on the column offset
                for (int i = 0; i < n; ++i)
                    for (int l = 0; l < n; ++l) {
                        int off = g.col_of(i) - g.col_of(l);
                        CHECK(c.R(i, l) ==
                              doctest::Approx(sinc(2.0 * kPi * g.d2 * off / g.wavelength))
                                  .epsilon(1e-14));
                    }
                // the factor reproduces the (clamped) matrix
                Mat rec = c.factor * c.factor.transpose();
                CHECK((rec - c.R).cwiseAbs().maxCoeff() < 1e-8);
                // lower-triangular factor
                for (int i = 0; i < n; ++i)
                    for (int l = i + 1; l < n; ++l) CHECK(c.factor(i, l) == 0.0);
            }
        }
    }
}

TEST_CASE("monte carlo correlation: single sample is rank-1 with unit diagonal") {
    auto g = grid(2, 2, 0.25);
    auto mc = monte_carlo_correlation(g, 1, 7);
    for (int i = 0; i < 4; ++i) CHECK(mc.real_part(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    CMat full = mc.real_part.cast<cplx>() + cplx(0, 1) * mc.imag_part.cast<cplx>();
    Eigen::JacobiSVD<CMat> svd(full);
    CHECK(svd.singularValues()(0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(svd.singularValues()(1) < 1e-9);
}

TEST_CASE("monte carlo correlation matches the exact isotropic law") {
    auto g = grid(4, 4, 0.25);
    auto mc = monte_carlo_correlation(g, 200000, 20260809);
    double max_err = 0.0;
    for (int i = 0; i < 16; ++i)
        for (int l = 0; l < 16; ++l) {
            double exact = isotropic_correlation_exact(g, g.row_of(i) - g.row_of(l),
                                                       g.col_of(i) - g.col_of(l));
            max_err = std::max(max_err, std::abs(mc.real_part(i, l) - exact));
        }
    CHECK(max_err < 0.02);
    CHECK(mc.imag_part.cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("monte carlo agrees with the closed form where the latter is exact") {
    // same-row pairs of a planar panel
    auto g = grid(4, 4, 0.25);
    auto mc = monte_carlo_correlation(g, 200000, 99);
    auto cf = build_correlation(g);
    double max_err = 0.0;
    for (int i = 0; i < 16; ++i)
        for (int l = 0; l < 16; ++l)
            if (g.row_of(i) == g.row_of(l))
                max_err = std::max(max_err, std::abs(mc.real_part(i, l) - cf.R(i, l)));
    CHECK(max_err < 0.02);

    // degenerate single-row panel: closed form is exact everywhere
    auto line = grid(1, 8, 0.25);
    auto mc1 = monte_carlo_correlation(line, 200000, 123);
    auto cf1 = build_correlation(line);
    CHECK((mc1.real_part - cf1.R).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("sample_correlated_vector basics") {
    auto c = build_correlation(grid(2, 4, 0.25));

    Rng rng(5);
    CVec zero = sample_correlated_vector(c, 0.0, rng);
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

    Rng a(42), b(42);
    CVec va = sample_correlated_vector(c, 2.0, a);
    CVec vb = sample_correlated_vector(c, 2.0, b);
    CHECK((va - vb).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(sample_correlated_vector(c, -1.0, rng), std::domain_error);
}

TEST_CASE("sample covariance converges to variance * R") {
    // identity case: half-wavelength line has exactly R = I
    auto ident = build_correlation(grid(1, 8, 0.5));
    Rng rng(11);
    CMat cov = CMat::Zero(8, 8);
    const int draws = 100000;
    for (int s = 0; s < draws; ++s) {
        CVec v = sample_correlated_vector(ident, 1.0, rng);
        cov.noalias() += v * v.adjoint();
    }
    cov /= draws;
    CHECK((cov - CMat::Identity(8, 8)).cwiseAbs().maxCoeff() < 0.05);

    // correlated case at N = 16: Frobenius-relative error < 0.05
    auto c = build_correlation(grid(4, 4, 0.25));
    Rng rng2(12);
    CMat cov2 = CMat::Zero(16, 16);
    const double variance = 3.0;
    for (int s = 0; s < draws; ++s) {
        CVec v = sample_correlated_vector(c, variance, rng2);
        cov2.noalias() += v * v.adjoint();
    }
    cov2 /= draws;
    Mat target = variance * c.R;
    double rel = (cov2.real() - target).norm() / target.norm();
    CHECK(rel < 0.05);
    CHECK(cov2.imag().cwiseAbs().maxCoeff() < 0.05 * variance);
}

TEST_CASE("sample_slot: zero attenuation, cascade rule, per-entry variance") {
    auto env = small_env(4, 4, 2);
    auto corr = build_correlation(env.geometry);

    EnvConfig zero = env;
    zero.mu_m.assign(2, 0.0);
    zero.mu_0 = 0.0;
    Rng rng(3);
    auto s0 = sample_slot(zero, corr, rng);
    CHECK(s0.G.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s0.h.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s0.H.cwiseAbs().maxCoeff() == 0.0);

    // cascade invariant holds entry-wise on every draw
    Rng rng2(4);
    for (int rep = 0; rep < 10; ++rep) {
        auto s = sample_slot(env, corr, rng2);
        for (int i = 0; i < 16; ++i)
            for (int m = 0; m < 2; ++m)
                CHECK(s.H(i, m) == std::conj(s.h(i)) * s.G(i, m));
    }

    // per-entry variance of g_m within 5% of sigma_area * mu_m
    Rng rng3(5);
    const int slots = 100000;
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int s = 0; s < slots; ++s) {
        auto slot = sample_slot(env, corr, rng3);
        for (int m = 0; m < 2; ++m) acc(m) += slot.G.col(m).squaredNorm() / 16.0;
    }
    acc /= slots;
    const double expected = env.sigma_area() * 0.5;
    CHECK(acc(0) == doctest::Approx(expected).epsilon(0.05));
    CHECK(acc(1) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("cascaded correlation approaches R squared") {
    auto env = small_env(1, 4, 1, 0.25);
    auto corr = build_correlation(env.geometry);
    Rng rng(2026);
    Mat stat = cascaded_correlation_stat(env, corr, 200000, rng);
    for (int i = 0; i < 4; ++i) CHECK(stat(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    const double expected = (2.0 / kPi) * (2.0 / kPi);  // ~0.405
    CHECK(std::abs(stat(0, 1) - expected) < 0.03);

    auto env_half = small_env(1, 4, 1, 0.5);
    auto corr_half = build_correlation(env_half.geometry);
    Rng rng2(2027);
    Mat stat_half = cascaded_correlation_stat(env_half, corr_half, 200000, rng2);
    CHECK(std::abs(stat_half(0, 1)) < 0.03);
}

TEST_CASE("mrt_rate closed form and invariances") {
    CMat zero = CMat::Zero(2, 2);
    CHECK(mrt_rate(Vec::Zero(2), zero, 1.0, 1.0) == 0.0);

    CMat one(1, 1);
    one(0, 0) = 1.0;
    Vec anyphase(1);
    anyphase << 1.234;
    CHECK(mrt_rate(anyphase, one, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    // two-element alignment: rows (1, j), phases (0, -pi/2) -> |sum| = 2
    CMat h2(2, 1);
    h2(0, 0) = cplx(1.0, 0.0);
    h2(1, 0) = cplx(0.0, 1.0);
    Vec ph(2);
    ph << 0.0, -kPi / 2.0;
    CHECK(mrt_rate(ph, h2, 1.0, 1.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));

    // global phase shift and 2*pi wraps leave the rate unchanged
    Rng rng(77);
    CMat h(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 2; ++m) h(i, m) = rng.cnormal();
    Vec phases(4);
    for (int i = 0; i < 4; ++i) phases(i) = rng.uniform() * 2.0 * kPi;
    double base = mrt_rate(phases, h, 2.0, 0.5);
    CHECK(std::abs(mrt_rate(phases.array() + 0.7, h, 2.0, 0.5) - base) < 1e-10);
    Vec wrapped = phases;
    wrapped(2) += 2.0 * kPi;
    CHECK(std::abs(mrt_rate(wrapped, h, 2.0, 0.5) - base) < 1e-10);

    // rate through the explicit precoder matches
    CVec f = mrt_precoder(phases, h, 2.0);
    CHECK(f.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(2);
    for (int i = 0; i < 4; ++i)
        row += cplx(std::cos(phases(i)), std::sin(phases(i))) * h.row(i);
    double received = std::norm((row * f)(0));
    CHECK(std::log2(1.0 + received / 0.5) == doctest::Approx(base).epsilon(1e-12));

    CMat bad = h;
    bad(0, 0) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(mrt_rate(phases, bad, 1.0, 1.0), std::domain_error);
}
