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

#ifndef OOBBEAM_RENDER_HPP
#define OOBBEAM_RENDER_HPP

#include <Eigen/Dense>
#include <vector>

#include "oobbeam/channel.hpp"
#include "oobbeam/pulse.hpp"

namespace oobbeam
{

// Sampled tap-domain MIMO channel. Column l of flat is vec(H[l]) with H[l]
// of size m_rx x m_tx (column-major).
struct TapChannel
{
    Eigen::MatrixXcd flat; // (m_rx * m_tx) x L
    Eigen::Index m_rx = 0;
    Eigen::Index m_tx = 0;
    bool truncated = false; // pulse energy extends past L * ts

    Eigen::Index n_taps() const { return flat.cols(); }

    Eigen::Map<const Eigen::MatrixXcd> tap(Eigen::Index l) const
    {
        return {flat.col(l).data(), m_rx, m_tx};
    }
};

// Frequency-domain MIMO channel on a subset of the K subcarriers. Column i
// of flat is vec(H[subcarriers[i]]).
struct FreqChannel
{
    Eigen::MatrixXcd flat; // (m_rx * m_tx) x |subcarriers|
    std::vector<Eigen::Index> subcarriers; // ascending
    Eigen::Index m_rx = 0;
    Eigen::Index m_tx = 0;
    Eigen::Index n_fft = 0; // K

    Eigen::Index column_of(Eigen::Index k) const;

    Eigen::Map<const Eigen::MatrixXcd> at(Eigen::Index k) const
    {
        return {flat.col(column_of(k)).data(), m_rx, m_tx};
    }
};

// H[l] = sqrt(M_RX M_TX / rho_pl) sum_c sum_r alpha p(l ts - tau_c - tau_r)
//        a_RX(theta_c + dtheta_r) a_TX^*(phi_c + dphi_r), l in [0, L).
TapChannel render_taps(const ChannelRealization& ch, const RaisedCosine& pulse, double ts);

// H[k] = sum_l H[l] e^{-j 2 pi k l / K}; requires K >= L.
FreqChannel render_freq(const TapChannel& taps, Eigen::Index n_subcarriers);

// Same, evaluated only at the requested subcarrier indices.
FreqChannel render_freq_at(const TapChannel& taps, Eigen::Index n_subcarriers,
                           std::vector<Eigen::Index> ks);

// Narrowband single-matrix render with the pulse evaluated at -tau_c - tau_r.
Eigen::MatrixXcd render_narrowband_sub6(const ChannelRealization& ch, const RaisedCosine& pulse);

} // namespace oobbeam

#endif
