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

#include "oobbeam/experiment.hpp"
#include "oobbeam/io.hpp"
#include "oobbeam/select.hpp"
#include "test_helpers.hpp"

using namespace oobbeam;
using namespace oobbeam::testing;

namespace
{

// shrunk geometry so harness-level tests stay fast
ExperimentConfig mini_config()
{
    ExperimentConfig cfg = default_config();
    cfg.trials = 12;
    cfg.mmwave.m_tx = 8;
    cfg.mmwave.m_rx = 8;
    cfg.mmwave.n_taps = 8;
    cfg.mmwave.n_subcarriers = 32;
    cfg.mmwave.cp_len = 8;
    cfg.n_meas_grid = {{3, 4}};
    cfg.success_set_sizes = {1, 5};
    cfg.coherence_blocks = {64.0};
    return cfg;
}

} // namespace

TEST_CASE("training efficiency and effective rate")
{
    CHECK(training_efficiency(6144.0, 64) == doctest::Approx(1.0 - 64.0 / 6144.0).epsilon(1e-15));
    CHECK(training_efficiency(64.0, 64) == 0.0);
    CHECK(training_efficiency(32.0, 64) == 0.0);
    CHECK(training_efficiency(std::numeric_limits<double>::infinity(), 1 << 20) == 1.0);

    SUBCASE("hand-built single-trial, single-subcarrier record")
    {
        const double snr_gain = 3.7; // P_t/(K sigma2) |a^* H a|^2 folded together
        TrialRecord rec;
        rec.trial = 0;
        rec.method = "omp";
        rec.n_meas = 16;
        rec.se_per_k = Eigen::VectorXd::Constant(1, std::log2(1.0 + snr_gain));
        const double eta = 1.0 - 16.0 / 48.0;
        const double want = eta * std::log2(1.0 + snr_gain);
        CHECK(rel_err(effective_rate({rec}, 48.0, 16), want) < 1e-10);
        CHECK(effective_rate({rec}, 16.0, 16) == 0.0);
    }

    SUBCASE("rate averages over trials and subcarriers")
    {
        TrialRecord a;
        a.se_per_k = Eigen::VectorXd::Constant(4, 2.0);
        TrialRecord b;
        b.se_per_k = Eigen::VectorXd::Constant(4, 6.0);
        CHECK(effective_rate({a, b}, std::numeric_limits<double>::infinity(), 10) ==
              doctest::Approx(4.0).epsilon(1e-15));
    }
}

TEST_CASE("success percentage against ranked ground truth")
{
    const std::vector<std::vector<Eigen::Index>> truth = {{5, 3, 9}, {1, 0, 2}};
    TrialRecord r0;
    r0.trial = 0;
    r0.pair = BeamPair::from_flat(5, 4);
    TrialRecord r1;
    r1.trial = 1;
    r1.pair = BeamPair::from_flat(2, 4);

    CHECK(success_percentage({r0, r1}, truth, 1, 4) == 50.0);
    CHECK(success_percentage({r0, r1}, truth, 3, 4) == 100.0);
    CHECK(success_percentage({r1}, truth, 2, 4) == 0.0);
    // monotone in the set size by construction
    for (int n = 1; n < 3; ++n)
        CHECK(success_percentage({r0, r1}, truth, n + 1, 4) >=
              success_percentage({r0, r1}, truth, n, 4));
}

TEST_CASE("experiment run: shape, determinism, and metric sanity")
{
    ExperimentConfig cfg = mini_config();
    cfg.coherence_blocks = {32.0, 64.0, std::numeric_limits<double>::infinity()};

    const ExperimentResult a = run_experiment(cfg);
    const ExperimentResult b = run_experiment(cfg);

    // methods: exhaustive (1 key) + 3 compressed (1 cell each), 3 t_c rows per key
    CHECK(a.table.rows.size() == 4 * 3);
    CHECK(metric_table_csv(a.table) == metric_table_csv(b.table));

    for (const MetricRow& row : a.table.rows)
    {
        CHECK(row.r_eff >= 0.0);
        REQUIRE(row.sp.size() == 2);
        CHECK(row.sp[0] >= 0.0);
        CHECK(row.sp[1] <= 100.0);
        CHECK(row.sp[1] >= row.sp[0]); // B_1 is contained in B_5
        CHECK(row.trials == cfg.trials);
    }

    // eta ordering: for one key, r_eff is non-decreasing in t_c
    for (std::size_t base = 0; base < a.table.rows.size(); base += 3)
    {
        CHECK(a.table.rows[base].r_eff <= a.table.rows[base + 1].r_eff);
        CHECK(a.table.rows[base + 1].r_eff <= a.table.rows[base + 2].r_eff);
    }

    // thread count must not change results
    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(metric_table_csv(run_experiment(threaded).table) == metric_table_csv(a.table));
}

TEST_CASE("noiseless exhaustive rate bounds the noisy methods on aggregate")
{
    ExperimentConfig cfg = mini_config();
    cfg.trials = 60;
    cfg.coherence_blocks = {std::numeric_limits<double>::infinity()};

    const ExperimentResult res = run_experiment(cfg);

    // rebuild the noiseless-exhaustive rate from the recorded ground truth
    // (eta = 1 everywhere, so rows compare directly)
    double best_rate = 0.0;
    for (std::size_t i = 0; i < res.record_keys.size(); ++i)
        if (res.record_keys[i].first == "exhaustive")
            best_rate = std::max(best_rate, effective_rate(res.records[i],
                                                           std::numeric_limits<double>::infinity(),
                                                           res.record_keys[i].second));
    for (const MetricRow& row : res.table.rows)
        CHECK(row.r_eff <= best_rate * 1.02 + 1e-12);
}

TEST_CASE("metric table csv formatting")
{
    MetricTable empty;
    empty.sp_sizes = {1, 5};
    empty.config_hash = "00";
    empty.seed = 7;
    CHECK(metric_table_csv(empty) == "method,n_meas,t_c,r_eff,sp_b1,sp_b5,e,config_hash,seed\n");

    MetricRow row;
    row.method = "omp";
    row.n_meas = 64;
    row.t_c = std::numeric_limits<double>::infinity();
    row.r_eff = 1.25;
    row.sp = {74.0, 80.5};
    row.trials = 500;
    MetricTable t;
    t.sp_sizes = {1, 5};
    t.config_hash = "deadbeef00000000";
    t.seed = 11;
    t.rows = {row};
    CHECK(metric_table_csv(t) ==
          "method,n_meas,t_c,r_eff,sp_b1,sp_b5,e,config_hash,seed\n"
          "omp,64,inf,1.25,74,80.5,500,deadbeef00000000,11\n");
}

TEST_CASE("configuration parsing and validation")
{
    SUBCASE("defaults are valid and round-trip through json")
    {
        const ExperimentConfig cfg = default_config();
        CHECK_NOTHROW(validate(cfg));
        const ExperimentConfig back = config_from_json(config_to_json(cfg));
        CHECK(config_hash(back) == config_hash(cfg));
    }

    SUBCASE("coherence values at or below zero read as infinite")
    {
        nlohmann::json j;
        j["coherence_blocks"] = {0.0, 4096.0};
        const ExperimentConfig cfg = config_from_json(j);
        CHECK(std::isinf(cfg.coherence_blocks[0]));
        CHECK(cfg.coherence_blocks[1] == 4096.0);
    }

    SUBCASE("bad settings throw")
    {
        ExperimentConfig cfg = default_config();
        cfg.methods = {"omp", "banana"};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

        cfg = default_config();
        cfg.methods = {"somp"}; // needs all_k probing
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

        cfg = default_config();
        cfg.probe = ProbeMode::all_k;
        cfg.methods = {"omp"};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

        cfg = default_config();
        cfg.cluster_override = ClusterOverride{};
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument); // C > 1

        cfg = default_config();
        cfg.j_p = 0.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

        cfg = default_config();
        cfg.n_meas_grid.clear();
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }

    SUBCASE("all-subcarrier joint methods validate with all_k probing")
    {
        ExperimentConfig cfg = default_config();
        cfg.probe = ProbeMode::all_k;
        cfg.methods = {"exhaustive", "somp", "lw-somp", "structured-lw-somp"};
        CHECK_NOTHROW(validate(cfg));
    }
}

TEST_CASE("result json carries config, noise calibration, and optional records")
{
    ExperimentConfig cfg = mini_config();
    cfg.trials = 3;
    cfg.per_trial_records = true;
    const ExperimentResult res = run_experiment(cfg);
    const nlohmann::json j = result_to_json(res, cfg);
    CHECK(j.contains("config"));
    CHECK(j.at("config_hash").get<std::string>() == config_hash(cfg));
    CHECK(j.at("noise").at("sigma2_mmwave").get<double>() > 0.0);
    CHECK(j.at("noise").at("sigma2_sub6").get<double>() > 0.0);
    CHECK(j.contains("trials"));
    // 3 trials x 4 record streams
    CHECK(j.at("trials").size() == 12);
    const auto& first = j.at("trials").at(0);
    CHECK(first.at("se_per_k").size() == 32);
}

TEST_CASE("channel dump and codebook export")
{
    const ExperimentConfig cfg = mini_config();
    Rng rng(5);
    GeneratedClusters gen = generate_clusters(cfg.sub6, cfg.mmwave, cfg.domain, rng);
    MultiBandRealization mb;
    mb.sub6.band = cfg.sub6;
    mb.mmwave.band = cfg.mmwave;
    mb.sub6.clusters = gen.band_a;
    mb.mmwave.clusters = gen.band_b;
    mb.sub6.rays = generate_rays(mb.sub6.clusters, cfg.sub6, rng);
    mb.mmwave.rays = generate_rays(mb.mmwave.clusters, cfg.mmwave, rng);
    mb.sub6.pathloss = 2.0;
    mb.mmwave.pathloss = 3.0;
    mb.shared_cluster_indices = gen.shared_indices;
    mb.n_clamped = gen.n_clamped;

    const nlohmann::json j = realization_to_json(mb);
    CHECK(j.at("sub6").at("clusters").size() == 4);
    CHECK(j.at("mmwave").at("clusters").size() == 3);
    CHECK(j.at("mmwave").at("rays").at(0).size() == 10);
    CHECK(j.at("mmwave").at("rays").at(0).at(0).at("alpha").size() == 2);

    Rng rng_cb(6);
    const Codebook cb = random_codebook(Ula{4, 0.5}, 3, 5, rng_cb);
    const nlohmann::json cj = codebook_to_json(cb);
    CHECK(cj.at("kind").get<std::string>() == "random_quantized");
    CHECK(cj.at("entries").size() == 4);
    CHECK(cj.at("entries").at(0).size() == 3);
    const double re = cj.at("entries").at(0).at(0).at(0).get<double>();
    const double im = cj.at("entries").at(0).at(0).at(1).get<double>();
    CHECK(std::abs(std::complex<double>(re, im)) == doctest::Approx(0.5).epsilon(1e-12));

    const Eigen::ArrayXXd m = Eigen::ArrayXXd::Constant(2, 2, 1.5);
    CHECK(matrix_csv(m) == "1.5,1.5\n1.5,1.5\n");
}
