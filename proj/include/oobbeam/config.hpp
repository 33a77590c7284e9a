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

#ifndef OOBBEAM_CONFIG_HPP
#define OOBBEAM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oobbeam/channel.hpp"

namespace oobbeam
{

struct SnrAnchor
{
    double distance_m = 80.0;
    double snr_db = -10.0;
};

// Fixed single-cluster geometry for spatial-mismatch studies; delays stay
// random. Requires one cluster per band.
struct ClusterOverride
{
    double sub6_aoa = 0.0;
    double sub6_aod = 0.0;
    double mmwave_aoa = 0.0;
    double mmwave_aod = 0.0;
};

enum class ProbeMode
{
    single_k,
    all_k
};

struct ExperimentConfig
{
    std::uint64_t seed = 1;
    int trials = 200;
    double distance_m = 40.0;
    // one effective-rate row per coherence value; <= 0 encodes an infinite
    // coherence interval
    std::vector<double> coherence_blocks;
    ProbeMode probe = ProbeMode::single_k;
    std::vector<std::string> methods;
    std::vector<std::pair<int, int>> n_meas_grid; // (n_rx, n_tx)
    double j_p = 0.5;
    std::optional<double> j_w; // empty selects the scale-matching default
    double epsilon_p = 1e-3;
    std::vector<int> success_set_sizes = {1, 5};
    double tx_power_dbm = 37.0;
    SnrAnchor mmwave_anchor;
    double sub6_anchor_distance_m = 40.0;
    double sub6_snr_offset_db = 20.0;  // over the mmWave SNR implied at that distance
    std::optional<double> sub6_snr_db; // absolute override
    int sub6_n_training = 0;           // 0 selects m_tx
    double pulse_rolloff = 1.0;
    int super_codebook_size = 0; // 0 selects 4 * max(n_beams, m)
    BandSpec sub6;
    BandSpec mmwave;
    AngularDomain domain;
    std::optional<ClusterOverride> cluster_override;
    int threads = 0; // 0 selects hardware concurrency
    std::string out_csv;
    std::string out_json;
    bool per_trial_records = false;
};

// Section V reference setup: 3.5 GHz / 28 GHz, 4- and 32-element arrays,
// Fig. 5 style method list and measurement grid.
ExperimentConfig default_config();

// Throws std::invalid_argument on malformed or inconsistent settings.
void validate(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);

// FNV-1a over the canonical JSON form, as a 16-digit hex string.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace oobbeam

#endif
