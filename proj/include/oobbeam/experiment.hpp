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

#ifndef OOBBEAM_EXPERIMENT_HPP
#define OOBBEAM_EXPERIMENT_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "oobbeam/config.hpp"
#include "oobbeam/frontend.hpp"

namespace oobbeam
{

// One Monte-Carlo trial's outcome for one method and measurement budget.
struct TrialRecord
{
    int trial = 0;
    std::string method;
    BeamPair pair;
    Eigen::VectorXd se_per_k; // spectral efficiency per subcarrier (bit/s/Hz)
    Eigen::Index n_meas = 0;  // training blocks consumed
};

// Fraction of the coherence interval left for data transmission.
inline double training_efficiency(double t_c, Eigen::Index n_meas)
{
    if (std::isinf(t_c))
        return 1.0;
    return std::max(0.0, 1.0 - static_cast<double>(n_meas) / t_c);
}

// R_eff = eta / (E K) * sum_e sum_k se_per_k, eta = max(0, 1 - n_meas / t_c).
double effective_rate(const std::vector<TrialRecord>& records, double t_c, Eigen::Index n_meas);

// Percentage of trials whose selected flat index lands in the top n_best
// noiseless beam pairs; truth_ranked holds one best-first index list per
// trial and m_rx fixes the flat index convention.
double success_percentage(const std::vector<TrialRecord>& records,
                          const std::vector<std::vector<Eigen::Index>>& truth_ranked, int n_best,
                          Eigen::Index m_rx);

struct MetricRow
{
    std::string method;
    Eigen::Index n_meas = 0;
    double t_c = 0.0; // infinity allowed
    double r_eff = 0.0;
    std::vector<double> sp; // one per configured success-set size, in %
    int trials = 0;
};

struct MetricTable
{
    std::vector<int> sp_sizes;
    std::vector<MetricRow> rows;
    std::string config_hash;
    std::uint64_t seed = 0;
};

struct ExperimentResult
{
    MetricTable table;
    // per-method records in config order: records[m] aligns with
    // record_keys[m] = (method name, n_meas)
    std::vector<std::pair<std::string, Eigen::Index>> record_keys;
    std::vector<std::vector<TrialRecord>> records;
    std::vector<std::vector<Eigen::Index>> truth_ranked; // per trial
    double sigma2_mmwave = 0.0;
    double sigma2_sub6 = 0.0;
    double sub6_snr_db = 0.0; // at the sub-6 anchor distance
};

// Full Monte-Carlo run: coupled channel generation, sub-6 extraction,
// training synthesis, selection, and metric aggregation. Deterministic for
// a fixed config and seed, independent of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministically formatted CSV, one row per metric cell:
// method,n_meas,t_c,r_eff,sp_b<N>...,e,config_hash,seed
std::string metric_table_csv(const MetricTable& table);

// Result JSON: config echo, hash, noise calibration metadata, metric rows,
// and optionally the per-trial records.
nlohmann::json result_to_json(const ExperimentResult& result, const ExperimentConfig& cfg);

// Write CSV/JSON outputs to the paths in cfg (empty paths are skipped).
void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg);

} // namespace oobbeam

#endif
