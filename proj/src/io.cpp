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

#include "oobbeam/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oobbeam
{

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec <= 16; ++prec)
    {
        char probe[32];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v)
            return probe;
    }
    return buf;
}

namespace
{

nlohmann::json cplx(const std::complex<double>& z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json channel_to_json(const ChannelRealization& ch)
{
    nlohmann::json j;
    j["fc_hz"] = ch.band.fc;
    j["m_rx"] = ch.band.m_rx;
    j["m_tx"] = ch.band.m_tx;
    j["pathloss_linear"] = ch.pathloss;
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : ch.clusters)
        clusters.push_back({{"tau_s", c.tau}, {"aoa_rad", c.aoa}, {"aod_rad", c.aod}});
    j["clusters"] = clusters;
    nlohmann::json rays = nlohmann::json::array();
    for (const auto& cluster_rays : ch.rays)
    {
        nlohmann::json per_cluster = nlohmann::json::array();
        for (const auto& r : cluster_rays)
            per_cluster.push_back({{"alpha", cplx(r.alpha)},
                                   {"tau_s", r.tau},
                                   {"aoa_offset_rad", r.aoa_offset},
                                   {"aod_offset_rad", r.aod_offset}});
        rays.push_back(per_cluster);
    }
    j["rays"] = rays;
    return j;
}

} // namespace

nlohmann::json realization_to_json(const MultiBandRealization& mb)
{
    nlohmann::json j;
    j["sub6"] = channel_to_json(mb.sub6);
    j["mmwave"] = channel_to_json(mb.mmwave);
    j["shared_cluster_indices"] = mb.shared_cluster_indices;
    j["n_clamped"] = mb.n_clamped;
    return j;
}

nlohmann::json codebook_to_json(const Codebook& cb)
{
    nlohmann::json j;
    j["kind"] = to_string(cb.kind);
    j["phase_bits"] = cb.phase_bits;
    j["m"] = cb.m();
    j["n_beams"] = cb.n_beams();
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < cb.matrix.rows(); ++r)
    {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < cb.matrix.cols(); ++c)
            row.push_back(cplx(cb.matrix(r, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

std::string matrix_csv(const Eigen::ArrayXXd& m)
{
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            if (c > 0)
                out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << contents;
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace oobbeam
