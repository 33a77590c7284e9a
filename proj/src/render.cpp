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

#include "oobbeam/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oobbeam
{

Eigen::Index FreqChannel::column_of(Eigen::Index k) const
{
    const auto it = std::lower_bound(subcarriers.begin(), subcarriers.end(), k);
    if (it == subcarriers.end() || *it != k)
        throw std::invalid_argument("FreqChannel: subcarrier not rendered");
    return static_cast<Eigen::Index>(it - subcarriers.begin());
}

TapChannel render_taps(const ChannelRealization& ch, const RaisedCosine& pulse, double ts)
{
    validate(ch.band, true);
    if (ts <= 0.0)
        throw std::invalid_argument("render_taps: sampling interval must be positive");
    if (ch.pathloss <= 0.0)
        throw std::invalid_argument("render_taps: pathloss must be positive");

    const Eigen::Index m_rx = ch.band.m_rx;
    const Eigen::Index m_tx = ch.band.m_tx;
    const Eigen::Index n_taps = ch.band.n_taps;
    const Ula rx = ch.band.rx_ula();
    const Ula tx = ch.band.tx_ula();

    Eigen::Index n_paths = 0;
    for (const auto& cluster_rays : ch.rays)
        n_paths += static_cast<Eigen::Index>(cluster_rays.size());

    // column p of outer is vec(a_rx a_tx^*) for one path; coeff(p, l) carries
    // the complex gain times the pulse sample, so flat = scale * outer * coeff
    Eigen::MatrixXcd outer(m_rx * m_tx, n_paths);
    Eigen::MatrixXcd coeff(n_paths, n_taps);

    double max_ray_delay = -std::numeric_limits<double>::infinity();
    Eigen::Index p = 0;
    for (std::size_t c = 0; c < ch.clusters.size(); ++c)
    {
        const ClusterParamSet& cl = ch.clusters[c];
        for (const Ray& ray : ch.rays[c])
        {
            const Eigen::VectorXcd a_rx = array_response(rx, cl.aoa + ray.aoa_offset);
            const Eigen::VectorXcd a_tx = array_response(tx, cl.aod + ray.aod_offset);
            outer.col(p) = (a_rx * a_tx.adjoint()).reshaped();
            const double path_delay = cl.tau + ray.tau;
            for (Eigen::Index l = 0; l < n_taps; ++l)
                coeff(p, l) = ray.alpha * pulse(static_cast<double>(l) * ts - path_delay);
            max_ray_delay = std::max(max_ray_delay, ray.tau);
            ++p;
        }
    }

    TapChannel out;
    out.m_rx = m_rx;
    out.m_tx = m_tx;
    const double scale = std::sqrt(static_cast<double>(m_rx * m_tx) / ch.pathloss);
    out.flat = scale * (outer * coeff);
    out.truncated = static_cast<double>(n_taps) * ts < ch.band.tau_max + max_ray_delay;
    return out;
}

namespace
{

FreqChannel freq_from_taps(const TapChannel& taps, Eigen::Index n_subcarriers,
                           std::vector<Eigen::Index> ks)
{
    const Eigen::Index n_taps = taps.n_taps();
    if (n_subcarriers < n_taps)
        throw std::invalid_argument("render_freq: need n_subcarriers >= n_taps");
    for (Eigen::Index k : ks)
        if (k < 0 || k >= n_subcarriers)
            throw std::invalid_argument("render_freq: subcarrier index out of range");
    if (!std::is_sorted(ks.begin(), ks.end()))
        std::sort(ks.begin(), ks.end());

    Eigen::MatrixXcd dft(n_taps, static_cast<Eigen::Index>(ks.size()));
    for (std::size_t i = 0; i < ks.size(); ++i)
    {
        const double w = -2.0 * pi * static_cast<double>(ks[i]) / static_cast<double>(n_subcarriers);
        for (Eigen::Index l = 0; l < n_taps; ++l)
            dft(l, static_cast<Eigen::Index>(i)) = std::polar(1.0, w * static_cast<double>(l));
    }

    FreqChannel out;
    out.m_rx = taps.m_rx;
    out.m_tx = taps.m_tx;
    out.n_fft = n_subcarriers;
    out.subcarriers = std::move(ks);
    out.flat = taps.flat * dft;
    return out;
}

} // namespace

FreqChannel render_freq(const TapChannel& taps, Eigen::Index n_subcarriers)
{
    std::vector<Eigen::Index> ks(static_cast<std::size_t>(n_subcarriers));
    std::iota(ks.begin(), ks.end(), Eigen::Index{0});
    return freq_from_taps(taps, n_subcarriers, std::move(ks));
}

FreqChannel render_freq_at(const TapChannel& taps, Eigen::Index n_subcarriers,
                           std::vector<Eigen::Index> ks)
{
    return freq_from_taps(taps, n_subcarriers, std::move(ks));
}

Eigen::MatrixXcd render_narrowband_sub6(const ChannelRealization& ch, const RaisedCosine& pulse)
{
    validate(ch.band, false);
    if (ch.pathloss <= 0.0)
        throw std::invalid_argument("render_narrowband_sub6: pathloss must be positive");

    const Ula rx = ch.band.rx_ula();
    const Ula tx = ch.band.tx_ula();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ch.band.m_rx, ch.band.m_tx);
    for (std::size_t c = 0; c < ch.clusters.size(); ++c)
    {
        const ClusterParamSet& cl = ch.clusters[c];
        for (const Ray& ray : ch.rays[c])
        {
            const std::complex<double> g = ray.alpha * pulse(-cl.tau - ray.tau);
            h.noalias() += g * array_response(rx, cl.aoa + ray.aoa_offset) *
                           array_response(tx, cl.aod + ray.aod_offset).adjoint();
        }
    }
    const double scale = std::sqrt(static_cast<double>(ch.band.m_rx * ch.band.m_tx) / ch.pathloss);
    return scale * h;
}

} // namespace oobbeam
