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

#include "oobbeam/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oobbeam/channel.hpp"
#include "oobbeam/linalg.hpp"

namespace oobbeam
{

double calibrate_noise(double anchor_distance_m, double target_snr_db, double fc_hz,
                       double pathloss_exponent, double p_t_watts, Eigen::Index n_subcarriers)
{
    if (p_t_watts <= 0.0 || n_subcarriers < 1)
        throw std::invalid_argument("calibrate_noise: bad power or subcarrier count");
    const double rho = pathloss_linear(anchor_distance_m, fc_hz, pathloss_exponent);
    const double rx_power = p_t_watts / static_cast<double>(n_subcarriers) / rho;
    return rx_power / std::pow(10.0, target_snr_db / 10.0);
}

Eigen::Index MeasurementSet::column_of(Eigen::Index k) const
{
    const auto it = std::lower_bound(probed.begin(), probed.end(), k);
    if (it == probed.end() || *it != k)
        throw std::invalid_argument("MeasurementSet: subcarrier not probed");
    return static_cast<Eigen::Index>(it - probed.begin());
}

Eigen::MatrixXcd assemble_sensing(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& q,
                                  const Eigen::MatrixXcd& a_tx, const Eigen::MatrixXcd& a_rx)
{
    if (f.rows() != a_tx.rows() || q.rows() != a_rx.rows())
        throw std::invalid_argument("assemble_sensing: inconsistent dimensions");
    const Eigen::MatrixXcd left = f.transpose() * a_tx.conjugate(); // n_tx x m_tx
    const Eigen::MatrixXcd right = q.adjoint() * a_rx;              // n_rx x m_rx
    return kron(left, right);
}

MeasurementSet measure(const FreqChannel& ch, const Codebook& f, const Codebook& q,
                       const Codebook& a_tx, const Codebook& a_rx, const NoiseModel& noise,
                       std::vector<Eigen::Index> probed, double p_t, Rng& rng)
{
    if (probed.empty())
        throw std::invalid_argument("measure: no probed subcarriers");
    if (!std::is_sorted(probed.begin(), probed.end()))
        std::sort(probed.begin(), probed.end());
    for (Eigen::Index k : probed)
        if (k < 0 || k >= ch.n_fft)
            throw std::invalid_argument("measure: subcarrier index out of range");
    if (p_t <= 0.0)
        throw std::invalid_argument("measure: transmit power must be positive");

    // noise after combining and division by the constant-power training
    const double post_var = noise.sigma2 * static_cast<double>(ch.n_fft) / p_t;

    MeasurementSet ms;
    ms.f = f;
    ms.q = q;
    ms.m_rx = a_rx.n_beams();
    ms.m_tx = a_tx.n_beams();
    ms.probed = std::move(probed);
    ms.psi = assemble_sensing(f.matrix, q.matrix, a_tx.matrix, a_rx.matrix);
    ms.y.resize(q.n_beams() * f.n_beams(), static_cast<Eigen::Index>(ms.probed.size()));
    for (std::size_t i = 0; i < ms.probed.size(); ++i)
    {
        Eigen::MatrixXcd y_k = q.matrix.adjoint() * ch.at(ms.probed[i]) * f.matrix;
        if (noise.sigma2 > 0.0)
            for (Eigen::Index c = 0; c < y_k.cols(); ++c)
                for (Eigen::Index r = 0; r < y_k.rows(); ++r)
                    y_k(r, c) += rng.cnormal(post_var);
        ms.y.col(static_cast<Eigen::Index>(i)) = y_k.reshaped();
    }
    return ms;
}

Eigen::VectorXd exhaustive_scores(const FreqChannel& ch, const Codebook& a_rx,
                                  const Codebook& a_tx, const NoiseModel& noise,
                                  const std::vector<Eigen::Index>& probed, double p_t, Rng& rng,
                                  bool noiseless)
{
    if (probed.empty())
        throw std::invalid_argument("exhaustive_scores: no probed subcarriers");
    const double post_var = noise.sigma2 * static_cast<double>(ch.n_fft) / p_t;

    Eigen::VectorXd scores = Eigen::VectorXd::Zero(a_rx.n_beams() * a_tx.n_beams());
    for (Eigen::Index k : probed)
    {
        Eigen::MatrixXcd g = beamspace(ch.at(k), a_rx.matrix, a_tx.matrix);
        if (!noiseless && noise.sigma2 > 0.0)
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                for (Eigen::Index r = 0; r < g.rows(); ++r)
                    g(r, c) += rng.cnormal(post_var);
        scores += g.reshaped().cwiseAbs2();
    }
    return scores;
}

BeamPair exhaustive_search(const FreqChannel& ch, const Codebook& a_rx, const Codebook& a_tx,
                           const NoiseModel& noise, const std::vector<Eigen::Index>& probed,
                           double p_t, Rng& rng, bool noiseless)
{
    const Eigen::VectorXd scores =
        exhaustive_scores(ch, a_rx, a_tx, noise, probed, p_t, rng, noiseless);
    return BeamPair::from_flat(argmax_lowest(scores), a_rx.n_beams());
}

} // namespace oobbeam
