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

#include "oobbeam/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

namespace oobbeam
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

const std::set<std::string> known_methods = {
    "exhaustive",         "omp",           "lw-omp",  "structured-omp", "structured-lw-omp",
    "somp",               "lw-somp",       "structured-somp", "structured-lw-somp"};

const std::set<std::string> single_k_only = {"omp", "lw-omp", "structured-omp",
                                             "structured-lw-omp"};
const std::set<std::string> all_k_only = {"somp", "lw-somp", "structured-somp",
                                          "structured-lw-somp"};

BandSpec band_from_json(const nlohmann::json& j)
{
    BandSpec s;
    s.fc = j.at("fc_hz").get<double>();
    s.bandwidth = j.at("bandwidth_hz").get<double>();
    s.n_clusters = j.at("n_clusters").get<Eigen::Index>();
    s.rays_per_cluster = j.at("rays_per_cluster").get<Eigen::Index>();
    s.tau_max = j.at("tau_max_s").get<double>();
    s.sigma_tau_ray = j.at("sigma_tau_ray_s").get<double>();
    s.sigma_aoa_ray = j.at("sigma_aoa_ray_rad").get<double>();
    s.sigma_aod_ray = j.at("sigma_aod_ray_rad").get<double>();
    s.m_tx = j.at("m_tx").get<Eigen::Index>();
    s.m_rx = j.at("m_rx").get<Eigen::Index>();
    s.d = j.value("spacing_wavelengths", 0.5);
    s.pathloss_exponent = j.value("pathloss_exponent", 3.0);
    s.n_taps = j.value("n_taps", Eigen::Index{0});
    s.n_subcarriers = j.value("n_subcarriers", Eigen::Index{0});
    s.cp_len = j.value("cp_len", Eigen::Index{0});
    return s;
}

nlohmann::json band_to_json(const BandSpec& s)
{
    return {{"fc_hz", s.fc},
            {"bandwidth_hz", s.bandwidth},
            {"n_clusters", s.n_clusters},
            {"rays_per_cluster", s.rays_per_cluster},
            {"tau_max_s", s.tau_max},
            {"sigma_tau_ray_s", s.sigma_tau_ray},
            {"sigma_aoa_ray_rad", s.sigma_aoa_ray},
            {"sigma_aod_ray_rad", s.sigma_aod_ray},
            {"m_tx", s.m_tx},
            {"m_rx", s.m_rx},
            {"spacing_wavelengths", s.d},
            {"pathloss_exponent", s.pathloss_exponent},
            {"n_taps", s.n_taps},
            {"n_subcarriers", s.n_subcarriers},
            {"cp_len", s.cp_len}};
}

double coherence_from_json(double v)
{
    return v <= 0.0 ? inf : v;
}

} // namespace

ExperimentConfig default_config()
{
    ExperimentConfig cfg;
    cfg.seed = 1;
    cfg.trials = 200;
    cfg.distance_m = 40.0;
    cfg.coherence_blocks = {6144.0};
    cfg.probe = ProbeMode::single_k;
    cfg.methods = {"exhaustive", "omp", "lw-omp", "structured-lw-omp"};
    cfg.n_meas_grid = {{4, 8}, {8, 8}, {8, 16}};
    cfg.j_p = 0.5;
    cfg.epsilon_p = 1e-3;
    cfg.success_set_sizes = {1, 5};
    cfg.tx_power_dbm = 37.0;
    cfg.mmwave_anchor = SnrAnchor{80.0, -10.0};
    cfg.sub6_anchor_distance_m = 40.0;
    cfg.sub6_snr_offset_db = 20.0;
    cfg.pulse_rolloff = 1.0;

    BandSpec& s6 = cfg.sub6;
    s6.fc = 3.5e9;
    s6.bandwidth = 1e6;
    s6.n_clusters = 4;
    s6.rays_per_cluster = 10;
    s6.tau_max = 57e-9;
    s6.sigma_tau_ray = 57e-9 / (20.0 * std::sqrt(12.0));
    s6.sigma_aoa_ray = 2.4 * pi / 180.0;
    s6.sigma_aod_ray = 2.4 * pi / 180.0;
    s6.m_tx = 4;
    s6.m_rx = 4;
    s6.d = 0.5;
    s6.pathloss_exponent = 3.0;

    BandSpec& mm = cfg.mmwave;
    mm.fc = 28e9;
    mm.bandwidth = 320e6;
    mm.n_clusters = 3;
    mm.rays_per_cluster = 10;
    mm.tau_max = 48e-9;
    mm.sigma_tau_ray = 48e-9 / (20.0 * std::sqrt(12.0));
    mm.sigma_aoa_ray = 2.0 * pi / 180.0;
    mm.sigma_aod_ray = 2.0 * pi / 180.0;
    mm.m_tx = 32;
    mm.m_rx = 32;
    mm.d = 0.5;
    mm.pathloss_exponent = 3.0;
    mm.n_taps = 63;
    mm.n_subcarriers = 256;
    mm.cp_len = 64;

    return cfg;
}

void validate(const ExperimentConfig& cfg)
{
    validate(cfg.sub6, false);
    validate(cfg.mmwave, true);
    if (cfg.trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    if (cfg.distance_m <= 0.0)
        throw std::invalid_argument("config: distance must be positive");
    if (cfg.coherence_blocks.empty())
        throw std::invalid_argument("config: need at least one coherence value");
    if (cfg.methods.empty())
        throw std::invalid_argument("config: need at least one method");
    if (!(cfg.j_p > 0.0 && cfg.j_p <= 1.0))
        throw std::invalid_argument("config: j_p must be in (0, 1]");
    if (!(cfg.epsilon_p > 0.0 && cfg.epsilon_p < 0.5))
        throw std::invalid_argument("config: epsilon_p must be in (0, 1/2)");
    if (cfg.success_set_sizes.empty())
        throw std::invalid_argument("config: need at least one success-set size");
    for (int n : cfg.success_set_sizes)
        if (n < 1 || n > cfg.mmwave.m_rx * cfg.mmwave.m_tx)
            throw std::invalid_argument("config: success-set size out of range");
    for (const std::string& m : cfg.methods)
    {
        if (!known_methods.count(m))
            throw std::invalid_argument("config: unknown method '" + m + "'");
        if (cfg.probe == ProbeMode::single_k && all_k_only.count(m))
            throw std::invalid_argument("config: method '" + m + "' needs probe mode all_k");
        if (cfg.probe == ProbeMode::all_k && single_k_only.count(m))
            throw std::invalid_argument("config: method '" + m + "' needs probe mode single_k");
    }
    bool needs_grid = false;
    for (const std::string& m : cfg.methods)
        needs_grid = needs_grid || m != "exhaustive";
    if (needs_grid && cfg.n_meas_grid.empty())
        throw std::invalid_argument("config: compressed methods need a measurement grid");
    for (auto [n_rx, n_tx] : cfg.n_meas_grid)
        if (n_rx < 1 || n_tx < 1)
            throw std::invalid_argument("config: measurement grid entries must be >= 1");
    if (cfg.cluster_override &&
        (cfg.sub6.n_clusters != 1 || cfg.mmwave.n_clusters != 1))
        throw std::invalid_argument("config: cluster override requires one cluster per band");
    if (cfg.sub6_n_training != 0 && cfg.sub6_n_training < cfg.sub6.m_tx)
        throw std::invalid_argument("config: sub-6 training count below m_tx");
    if (!(cfg.domain.lo < cfg.domain.hi))
        throw std::invalid_argument("config: empty angular domain");
}

ExperimentConfig config_from_json(const nlohmann::json& j)
{
    ExperimentConfig cfg = default_config();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.distance_m = j.value("distance_m", cfg.distance_m);
    if (j.contains("coherence_blocks"))
    {
        cfg.coherence_blocks.clear();
        const auto& c = j.at("coherence_blocks");
        if (c.is_array())
            for (const auto& v : c)
                cfg.coherence_blocks.push_back(coherence_from_json(v.get<double>()));
        else
            cfg.coherence_blocks.push_back(coherence_from_json(c.get<double>()));
    }
    if (j.contains("probe"))
    {
        const std::string p = j.at("probe").get<std::string>();
        if (p == "single_k")
            cfg.probe = ProbeMode::single_k;
        else if (p == "all_k")
            cfg.probe = ProbeMode::all_k;
        else
            throw std::invalid_argument("config: probe must be single_k or all_k");
    }
    if (j.contains("methods"))
        cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("n_meas_grid"))
    {
        cfg.n_meas_grid.clear();
        for (const auto& cell : j.at("n_meas_grid"))
        {
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument("config: n_meas_grid entries are [n_rx, n_tx]");
            cfg.n_meas_grid.emplace_back(cell[0].get<int>(), cell[1].get<int>());
        }
    }
    cfg.j_p = j.value("j_p", cfg.j_p);
    if (j.contains("j_w") && !j.at("j_w").is_null())
        cfg.j_w = j.at("j_w").get<double>();
    cfg.epsilon_p = j.value("epsilon_p", cfg.epsilon_p);
    if (j.contains("success_set_sizes"))
        cfg.success_set_sizes = j.at("success_set_sizes").get<std::vector<int>>();
    cfg.tx_power_dbm = j.value("tx_power_dbm", cfg.tx_power_dbm);
    if (j.contains("mmwave_snr_anchor"))
    {
        cfg.mmwave_anchor.distance_m = j.at("mmwave_snr_anchor").value("distance_m", 80.0);
        cfg.mmwave_anchor.snr_db = j.at("mmwave_snr_anchor").value("snr_db", -10.0);
    }
    if (j.contains("sub6_snr"))
    {
        const auto& s = j.at("sub6_snr");
        cfg.sub6_anchor_distance_m = s.value("anchor_distance_m", cfg.sub6_anchor_distance_m);
        cfg.sub6_snr_offset_db = s.value("offset_db", cfg.sub6_snr_offset_db);
        if (s.contains("snr_db") && !s.at("snr_db").is_null())
            cfg.sub6_snr_db = s.at("snr_db").get<double>();
    }
    cfg.sub6_n_training = j.value("sub6_n_training", cfg.sub6_n_training);
    cfg.pulse_rolloff = j.value("pulse_rolloff", cfg.pulse_rolloff);
    cfg.super_codebook_size = j.value("super_codebook_size", cfg.super_codebook_size);
    if (j.contains("sub6"))
        cfg.sub6 = band_from_json(j.at("sub6"));
    if (j.contains("mmwave"))
        cfg.mmwave = band_from_json(j.at("mmwave"));
    if (j.contains("angular_domain"))
    {
        cfg.domain.lo = j.at("angular_domain").at("lo_rad").get<double>();
        cfg.domain.hi = j.at("angular_domain").at("hi_rad").get<double>();
    }
    if (j.contains("cluster_override") && !j.at("cluster_override").is_null())
    {
        const auto& o = j.at("cluster_override");
        ClusterOverride ov;
        ov.sub6_aoa = o.value("sub6_aoa_rad", 0.0);
        ov.sub6_aod = o.value("sub6_aod_rad", 0.0);
        ov.mmwave_aoa = o.value("mmwave_aoa_rad", 0.0);
        ov.mmwave_aod = o.value("mmwave_aod_rad", 0.0);
        cfg.cluster_override = ov;
    }
    cfg.threads = j.value("threads", cfg.threads);
    if (j.contains("output"))
    {
        const auto& o = j.at("output");
        cfg.out_csv = o.value("csv", std::string{});
        cfg.out_json = o.value("json", std::string{});
        cfg.per_trial_records = o.value("per_trial", false);
    }
    validate(cfg);
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["distance_m"] = cfg.distance_m;
    nlohmann::json coh = nlohmann::json::array();
    for (double t : cfg.coherence_blocks)
        coh.push_back(std::isinf(t) ? 0.0 : t);
    j["coherence_blocks"] = coh;
    j["probe"] = cfg.probe == ProbeMode::single_k ? "single_k" : "all_k";
    j["methods"] = cfg.methods;
    nlohmann::json grid = nlohmann::json::array();
    for (auto [n_rx, n_tx] : cfg.n_meas_grid)
        grid.push_back({n_rx, n_tx});
    j["n_meas_grid"] = grid;
    j["j_p"] = cfg.j_p;
    j["j_w"] = cfg.j_w ? nlohmann::json(*cfg.j_w) : nlohmann::json(nullptr);
    j["epsilon_p"] = cfg.epsilon_p;
    j["success_set_sizes"] = cfg.success_set_sizes;
    j["tx_power_dbm"] = cfg.tx_power_dbm;
    j["mmwave_snr_anchor"] = {{"distance_m", cfg.mmwave_anchor.distance_m},
                              {"snr_db", cfg.mmwave_anchor.snr_db}};
    nlohmann::json s6snr = {{"anchor_distance_m", cfg.sub6_anchor_distance_m},
                            {"offset_db", cfg.sub6_snr_offset_db}};
    if (cfg.sub6_snr_db)
        s6snr["snr_db"] = *cfg.sub6_snr_db;
    j["sub6_snr"] = s6snr;
    j["sub6_n_training"] = cfg.sub6_n_training;
    j["pulse_rolloff"] = cfg.pulse_rolloff;
    j["super_codebook_size"] = cfg.super_codebook_size;
    j["sub6"] = band_to_json(cfg.sub6);
    j["mmwave"] = band_to_json(cfg.mmwave);
    j["angular_domain"] = {{"lo_rad", cfg.domain.lo}, {"hi_rad", cfg.domain.hi}};
    if (cfg.cluster_override)
        j["cluster_override"] = {{"sub6_aoa_rad", cfg.cluster_override->sub6_aoa},
                                 {"sub6_aod_rad", cfg.cluster_override->sub6_aod},
                                 {"mmwave_aoa_rad", cfg.cluster_override->mmwave_aoa},
                                 {"mmwave_aod_rad", cfg.cluster_override->mmwave_aod}};
    else
        j["cluster_override"] = nullptr;
    j["threads"] = cfg.threads;
    j["output"] = {{"csv", cfg.out_csv}, {"json", cfg.out_json},
                   {"per_trial", cfg.per_trial_records}};
    return j;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    try
    {
        return config_from_json(j);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::invalid_argument("config error in " + path + ": " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& cfg)
{
    // execution details do not change the experiment's identity
    ExperimentConfig canon = cfg;
    canon.threads = 0;
    canon.out_csv.clear();
    canon.out_json.clear();
    canon.per_trial_records = false;
    const std::string dump = config_to_json(canon).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace oobbeam
