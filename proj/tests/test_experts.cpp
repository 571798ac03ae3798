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

#include "dedt/beam_env.hpp"
#include "dedt/experts.hpp"
#include "dedt/trajectory.hpp"

using namespace dedt;

namespace {

CMat random_channel(int n, int m, Rng& rng, double scale = 1.0) {
    CMat h(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) h(i, j) = scale * rng.cnormal();
    return h;
}

EnvConfig desk_env(uint64_t seed) {
    EnvConfig env;
    env.geometry.n1 = 2;
    env.geometry.n2 = 2;
    env.geometry.d1 = 0.025;
    env.geometry.d2 = 0.025;
    env.geometry.wavelength = 0.1;
    env.bs_antennas = 2;
    env.mu_m = {0.5, 0.5};
    env.mu_0 = 0.5;
    env.tx_power = 1.0;
    env.noise_var = 1e-6;
    env.slots_per_episode = 7;
    env.seed = seed;
    return env;
}

}  // namespace

TEST_CASE("ao: single element, single antenna alignment") {
    Rng rng(1);
    CMat h1 = random_channel(1, 3, rng);
    auto r1 = ao_optimize(h1, 2.0, 0.5);
    CHECK(r1.phases(0) == 0.0);
    CHECK(r1.rate == doctest::Approx(std::log2(1.0 + 2.0 * h1.row(0).squaredNorm() / 0.5))
                         .epsilon(1e-12));

    // M = 1: the converged gain is (sum |H_n|)^2
    for (int rep = 0; rep < 10; ++rep) {
        CMat h = random_channel(6, 1, rng);
        AoOptions opt;
        opt.sweeps = 100;
        opt.tol = 1e-14;
        opt.check_monotone = true;
        auto r = ao_optimize(h, 1.0, 1.0, opt);
        double aligned = 0.0;
        for (int i = 0; i < 6; ++i) aligned += std::abs(h(i, 0));
        CHECK(r.gain == doctest::Approx(aligned * aligned).epsilon(1e-9));
        CHECK(r.phases(0) == 0.0);
    }
}

TEST_CASE("ao beats a large random search on small problems") {
    Rng rng(2);
    AoOptions opt;
    opt.random_restarts = 3;
    Rng restart_rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        CMat h = random_channel(3, 2, rng);
        auto r = ao_optimize(h, 1.0, 1.0, opt, &restart_rng);
        double best_random = 0.0;
        Rng search(100 + rep);
        for (int draw = 0; draw < 100000; ++draw) {
            Vec phases = random_phases(3, search);
            Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(2);
            for (int i = 0; i < 3; ++i)
                acc += cplx(std::cos(phases(i)), std::sin(phases(i))) * h.row(i);
            best_random = std::max(best_random, acc.squaredNorm());
        }
        CHECK(r.gain >= best_random - 1e-9);
    }
}

TEST_CASE("random phases: range, determinism, circular mean") {
    Rng a(5), b(5);
    Vec pa = random_phases(16, a);
    Vec pb = random_phases(16, b);
    CHECK(pa.size() == 16);
    CHECK((pa - pb).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 16; ++i) CHECK((pa(i) > -kPi && pa(i) <= kPi));

    Rng rng(6);
    cplx acc(0.0, 0.0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        double theta = random_phases(1, rng)(0);
        acc += cplx(std::cos(theta), std::sin(theta));
    }
    CHECK(std::abs(acc) / draws < 0.02);
}

TEST_CASE("rc imputation: copy-through and the 2*rho error law") {
    const int n = 16, m = 2;
    Rng rng(7);

    // rho = 0: the observed vector passes through exactly
    Vec x(2 * n * m);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    auto all = random_mask(n, n, rng);
    auto cond = extract_condition(x, all, n, m, 0.0, rng);
    Vec filled = rc_impute(cond, n, m, 1.0, rng);
    CHECK((filled - x).cwiseAbs().maxCoeff() == 0.0);

    // noiseless observations: NMSE ~= 2*rho within 5% over 1e4 trials
    for (double rho : {1.0, 0.5}) {
        double acc = 0.0;
        const int trials = 10000;
        for (int trial = 0; trial < trials; ++trial) {
            Vec truth(2 * n * m);
            for (Eigen::Index i = 0; i < truth.size(); ++i)
                truth(i) = rng.normal() * 0.7071067811865476;  // unit complex variance
            auto mask = random_mask(n, static_cast<int>(std::lround((1.0 - rho) * n)), rng);
            auto c = extract_condition(truth, mask, n, m, 0.0, rng);
            Vec hat = rc_impute(c, n, m, 1.0, rng);
            acc += nmse(hat, truth);
        }
        CHECK(acc / trials == doctest::Approx(2.0 * rho).epsilon(0.05));
    }
}

TEST_CASE("beam env: delegation, episode length, telescoping") {
    auto cfg = desk_env(42);
    BeamEnv env(cfg, true_state_provider(), 42);

    Vec s0 = env.reset();
    CHECK(s0.size() == 2 * 4 * 2);
    // state view is the vectorized true cascade
    CHECK((s0 - vectorize_csi(env.current_truth().H)).cwiseAbs().maxCoeff() == 0.0);

    Rng rng(8);
    std::vector<double> rewards;
    std::vector<Vec> states, actions;
    Vec state = s0;
    while (true) {
        Vec phases = random_phases(4, rng);
        const double expected = mrt_rate(phases, env.current_truth().H, cfg.tx_power,
                                         cfg.noise_var);
        auto step = env.step(phases);
        CHECK(step.reward == expected);  // bit-identical delegation
        states.push_back(state);
        actions.push_back(pairs_from_phases(phases));
        rewards.push_back(step.reward);
        if (step.done) break;
        state = step.next_state;
    }
    CHECK(static_cast<int>(rewards.size()) == cfg.slots_per_episode);

    auto traj = build_trajectory(states, actions, rewards);
    double total = 0.0;
    for (double r : rewards) total += r;
    CHECK(traj.returns_to_go.front() == doctest::Approx(total).epsilon(1e-12));

    env.reset();
    CHECK_THROWS(env.step(Vec::Zero(3)));
}
