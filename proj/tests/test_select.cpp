// SPDX-License-Identifier: Apache-2.0
//
// oobbeam - out-of-band aided beam selection for analog mmWave MIMO-OFDM
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

#include <cmath>

#include "oobbeam/select.hpp"
#include "test_helpers.hpp"

using namespace oobbeam;
using namespace oobbeam::testing;

namespace
{

// frequency-flat channel wrapper
FreqChannel flat_channel(const Eigen::MatrixXcd& h, Eigen::Index n_fft)
{
    TapChannel taps;
    taps.m_rx = h.rows();
    taps.m_tx = h.cols();
    taps.flat = Eigen::MatrixXcd::Zero(h.size(), 1);
    taps.flat.col(0) = h.reshaped();
    return render_freq(taps, n_fft);
}

// random channel, random training, optional planted on-grid path
struct Problem
{
    MeasurementSet ms;
    Eigen::Index planted = 0;
};

Problem make_problem(Eigen::Index m, Eigen::Index n_rx, Eigen::Index n_tx, double noise_var,
                     Rng& rng, bool plant, std::vector<Eigen::Index> probed = {0})
{
    const Ula ula{m, 0.5};
    const Codebook grid = dft_codebook(ula);
    Problem out;
    Eigen::MatrixXcd h;
    if (plant)
    {
        const Eigen::Index rx = rng.uniform_int(0, m - 1);
        const Eigen::Index tx = rng.uniform_int(0, m - 1);
        out.planted = tx * m + rx;
        h = grid.matrix.col(rx) * grid.matrix.col(tx).adjoint() *
            std::complex<double>(rng.normal(1.0) + 2.0, rng.normal(1.0));
    }
    else
    {
        h = random_cmatrix(m, m, rng);
    }
    const Eigen::Index n_fft = 1 + *std::max_element(probed.begin(), probed.end());
    const FreqChannel ch = flat_channel(h, std::max<Eigen::Index>(n_fft, 4));
    const Codebook f = random_codebook(ula, n_tx, 4, rng);
    const Codebook q = random_codebook(ula, n_rx, 4, rng);
    out.ms = measure(ch, f, q, grid, grid, NoiseModel{noise_var}, std::move(probed), 1.0, rng);
    return out;
}

PriorVector uniform_prior(Eigen::Index n, double delta)
{
    PriorVector p;
    p.p = Eigen::VectorXd::Constant(n, delta);
    p.j_p = delta;
    return p;
}

} // namespace

TEST_CASE("scores match the per-column oracle")
{
    Rng rng(60);
    for (int i = 0; i < 20; ++i)
    {
        const Problem pr = make_problem(8, 4, 4, 0.05, rng, false, {0, 1, 2});
        const SelectionResult omp = omp_select(pr.ms, 1);
        CHECK(rel_err(omp.scores, naive_scores(pr.ms.psi, pr.ms.y.col(1))) < 1e-12);

        const SelectionResult somp = somp_select(pr.ms);
        Eigen::VectorXd want = Eigen::VectorXd::Zero(pr.ms.psi.cols());
        for (Eigen::Index c = 0; c < pr.ms.y.cols(); ++c)
            want += naive_scores(pr.ms.psi, pr.ms.y.col(c));
        CHECK(rel_err(somp.scores, want) < 1e-12);

        // argmax matches a plain loop
        Eigen::Index best = 0;
        for (Eigen::Index r = 1; r < omp.scores.size(); ++r)
            if (omp.scores[r] > omp.scores[best])
                best = r;
        CHECK(omp.pair.flat(pr.ms.m_rx) == best);
    }
}

TEST_CASE("uniform priors collapse the weighted methods onto the plain ones")
{
    Rng rng(61);
    const WeightingConfig cfg{std::nullopt, 1e-3};
    for (int i = 0; i < 20; ++i)
    {
        const Problem pr = make_problem(8, 4, 4, 0.1, rng, false, {0, 1});
        for (double delta : {0.5, 0.25})
        {
            const PriorVector prior = uniform_prior(pr.ms.psi.cols(), delta);
            CHECK(lw_omp_select(pr.ms, 0, prior, cfg).pair.flat(8) ==
                  omp_select(pr.ms, 0).pair.flat(8));
            CHECK(lw_somp_select(pr.ms, prior, cfg).pair.flat(8) ==
                  somp_select(pr.ms).pair.flat(8));
        }
    }
}

TEST_CASE("vanishing weight recovers the unweighted argmax")
{
    Rng rng(62);
    const WeightingConfig cfg{0.0, 1e-3};
    for (int i = 0; i < 10; ++i)
    {
        const Problem pr = make_problem(8, 4, 4, 0.1, rng, false);
        PriorVector prior;
        prior.p = Eigen::VectorXd::Zero(64);
        for (Eigen::Index r = 0; r < 64; ++r)
            prior.p[r] = rng.uniform();
        CHECK(lw_omp_select(pr.ms, 0, prior, cfg).pair.flat(8) ==
              omp_select(pr.ms, 0).pair.flat(8));
        CHECK(lw_omp_select(pr.ms, 0, prior, cfg).j_w_used == 0.0);
    }
}

TEST_CASE("one probed subcarrier makes the joint methods equal the per-subcarrier ones")
{
    Rng rng(63);
    const WeightingConfig cfg{std::nullopt, 1e-3};
    const Problem pr = make_problem(8, 4, 4, 0.1, rng, false, {2});
    PriorVector prior;
    prior.p = Eigen::VectorXd::Zero(64);
    for (Eigen::Index r = 0; r < 64; ++r)
        prior.p[r] = rng.uniform();

    const SelectionResult omp = omp_select(pr.ms, 2);
    const SelectionResult somp = somp_select(pr.ms);
    CHECK((omp.scores - somp.scores).cwiseAbs().maxCoeff() == 0.0);

    const SelectionResult lw_omp = lw_omp_select(pr.ms, 2, prior, cfg);
    const SelectionResult lw_somp = lw_somp_select(pr.ms, prior, cfg);
    CHECK((lw_omp.scores - lw_somp.scores).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("overwhelming weight returns the prior argmax")
{
    Rng rng(64);
    const Problem pr = make_problem(8, 4, 4, 0.2, rng, false);
    PriorVector prior;
    prior.p = Eigen::VectorXd::Zero(64);
    for (Eigen::Index r = 0; r < 64; ++r)
        prior.p[r] = 0.3 * rng.uniform();
    prior.p[37] = 0.99; // strictly single-peaked
    const WeightingConfig cfg{1e9, 1e-3};
    CHECK(lw_omp_select(pr.ms, 0, prior, cfg).pair.flat(8) == 37);
}

TEST_CASE("auto weight scale matches the mean projection score")
{
    Rng rng(65);
    const Problem pr = make_problem(8, 4, 4, 0.1, rng, false);
    PriorVector prior;
    prior.p = Eigen::VectorXd::Zero(64);
    for (Eigen::Index r = 0; r < 64; ++r)
        prior.p[r] = rng.uniform();
    const WeightingConfig cfg{std::nullopt, 1e-3};
    const SelectionResult lw = lw_omp_select(pr.ms, 0, prior, cfg);
    const SelectionResult plain = omp_select(pr.ms, 0);
    CHECK(lw.j_w_used == doctest::Approx(plain.scores.mean()).epsilon(1e-15));
}

TEST_CASE("noiseless one-sparse recovery with full grid training")
{
    Rng rng(66);
    const WeightingConfig cfg{std::nullopt, 1e-3};
    for (int i = 0; i < 200; ++i)
    {
        const Ula ula{8, 0.5};
        const Codebook grid = dft_codebook(ula);
        const Eigen::Index rx = rng.uniform_int(0, 7);
        const Eigen::Index tx = rng.uniform_int(0, 7);
        const Eigen::MatrixXcd h = grid.matrix.col(rx) * grid.matrix.col(tx).adjoint();
        const FreqChannel ch = flat_channel(h, 4);
        const MeasurementSet ms =
            measure(ch, grid, grid, grid, grid, NoiseModel{0.0}, {0, 1}, 1.0, rng);
        const Eigen::Index want = tx * 8 + rx;
        const PriorVector prior = uniform_prior(64, 0.5);
        CHECK(omp_select(ms, 0).pair.flat(8) == want);
        CHECK(lw_omp_select(ms, 0, prior, cfg).pair.flat(8) == want);
        CHECK(somp_select(ms).pair.flat(8) == want);
        CHECK(lw_somp_select(ms, prior, cfg).pair.flat(8) == want);
    }
}

TEST_CASE("a prior planted on the true pair lifts the success rate under noise")
{
    Rng rng(67);
    const WeightingConfig cfg{std::nullopt, 1e-3};
    int omp_hits = 0;
    int lw_hits = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i)
    {
        const Problem pr = make_problem(8, 3, 3, 1.2, rng, true);
        PriorVector prior;
        prior.p = Eigen::VectorXd::Constant(64, 0.05);
        prior.p[pr.planted] = 0.9;
        omp_hits += omp_select(pr.ms, 0).pair.flat(8) == pr.planted ? 1 : 0;
        lw_hits += lw_omp_select(pr.ms, 0, prior, cfg).pair.flat(8) == pr.planted ? 1 : 0;
    }
    // noise level keeps the unweighted method well below certainty
    CHECK(omp_hits < 7 * trials / 10);
    CHECK(lw_hits > omp_hits);
}

TEST_CASE("success is non-decreasing in the measurement count")
{
    const int trials = 300;
    std::vector<double> success;
    for (Eigen::Index n : {4, 8, 12})
    {
        int hits = 0;
        Rng trial_rng(900); // identical channels across budgets
        for (int i = 0; i < trials; ++i)
        {
            const Problem pr = make_problem(8, n, n, 0.0, trial_rng, true);
            hits += omp_select(pr.ms, 0).pair.flat(8) == pr.planted ? 1 : 0;
        }
        success.push_back(100.0 * hits / trials);
    }
    CHECK(success[1] >= success[0] - 2.0);
    CHECK(success[2] >= success[1] - 2.0);
    CHECK(success[2] == 100.0); // empirical full-recovery budget for 8x8 grids
}

TEST_CASE("selection rejects inconsistent input")
{
    Rng rng(69);
    const Problem pr = make_problem(8, 4, 4, 0.1, rng, false, {3});
    CHECK_THROWS_AS(omp_select(pr.ms, 1), std::invalid_argument);
    PriorVector bad;
    bad.p = Eigen::VectorXd::Constant(10, 0.5);
    const WeightingConfig cfg{std::nullopt, 1e-3};
    CHECK_THROWS_AS(lw_omp_select(pr.ms, 3, bad, cfg), std::invalid_argument);
    PriorVector ok = uniform_prior(64, 0.5);
    CHECK_THROWS_AS(lw_omp_select(pr.ms, 3, ok, WeightingConfig{std::nullopt, 0.7}),
                    std::invalid_argument);
}
