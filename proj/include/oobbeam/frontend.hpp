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

#ifndef OOBBEAM_FRONTEND_HPP
#define OOBBEAM_FRONTEND_HPP

#include <Eigen/Dense>
#include <vector>

#include "oobbeam/codebook.hpp"
#include "oobbeam/render.hpp"
#include "oobbeam/rng.hpp"

namespace oobbeam
{

// Per-subcarrier noise variance (W) before combining. Training measurements
// see the post-division variance sigma2 * K / P_t.
struct NoiseModel
{
    double sigma2 = 0.0;
};

// Noise variance that anchors the pre-beamforming per-subcarrier SNR to
// target_snr_db at the given distance: sigma2 = (P_t/K) / rho_pl / 10^(snr/10).
double calibrate_noise(double anchor_distance_m, double target_snr_db, double fc_hz,
                       double pathloss_exponent, double p_t_watts, Eigen::Index n_subcarriers);

// One RX/TX codeword pair. Flat index r = tx * m_rx + rx matches the
// column-major vectorization of the beamspace matrix.
struct BeamPair
{
    Eigen::Index rx = 0;
    Eigen::Index tx = 0;

    Eigen::Index flat(Eigen::Index m_rx) const { return tx * m_rx + rx; }

    static BeamPair from_flat(Eigen::Index r, Eigen::Index m_rx)
    {
        return BeamPair{r % m_rx, r / m_rx};
    }
};

// Training measurements y[k] = vec(Q^* H[k] F + V[k]) for each probed
// subcarrier, with the sensing matrix Psi = (F^T (x) Q^*)(A_TX^c (x) A_RX).
struct MeasurementSet
{
    Eigen::MatrixXcd y;   // (n_rx n_tx) x |probed|
    Codebook f;           // TX training codebook
    Codebook q;           // RX training codebook
    Eigen::MatrixXcd psi; // (n_rx n_tx) x (m_rx m_tx)
    std::vector<Eigen::Index> probed; // ascending subcarrier indices
    Eigen::Index m_rx = 0; // dictionary (beamspace) dimensions
    Eigen::Index m_tx = 0;

    Eigen::Index column_of(Eigen::Index k) const;
};

// Psi = (F^T (x) Q^*)(A_TX^c (x) A_RX), assembled as
// (F^T A_TX^c) (x) (Q^* A_RX).
Eigen::MatrixXcd assemble_sensing(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& q,
                                  const Eigen::MatrixXcd& a_tx, const Eigen::MatrixXcd& a_rx);

// G[k] = A_RX^* H[k] A_TX
inline Eigen::MatrixXcd beamspace(const Eigen::Ref<const Eigen::MatrixXcd>& h_k,
                                  const Eigen::Ref<const Eigen::MatrixXcd>& a_rx,
                                  const Eigen::Ref<const Eigen::MatrixXcd>& a_tx)
{
    return a_rx.adjoint() * h_k * a_tx;
}

// Synthesize Y[k] = Q^* H[k] F + V[k] on the probed subcarriers, with V
// entries CN(0, sigma2 K / P_t) (noise already divided by the training).
// Noise is drawn column-major per subcarrier in probed order.
MeasurementSet measure(const FreqChannel& ch, const Codebook& f, const Codebook& q,
                       const Codebook& a_tx, const Codebook& a_rx, const NoiseModel& noise,
                       std::vector<Eigen::Index> probed, double p_t, Rng& rng);

// Received power per beam pair with full grid training, summed over the
// probed subcarriers; index r as in BeamPair::flat. With noiseless = false
// each beamspace entry observes one noisy measurement.
Eigen::VectorXd exhaustive_scores(const FreqChannel& ch, const Codebook& a_rx,
                                  const Codebook& a_tx, const NoiseModel& noise,
                                  const std::vector<Eigen::Index>& probed, double p_t, Rng& rng,
                                  bool noiseless);

// argmax of exhaustive_scores.
BeamPair exhaustive_search(const FreqChannel& ch, const Codebook& a_rx, const Codebook& a_tx,
                           const NoiseModel& noise, const std::vector<Eigen::Index>& probed,
                           double p_t, Rng& rng, bool noiseless);

} // namespace oobbeam

#endif
