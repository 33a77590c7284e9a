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

#ifndef OOBBEAM_OOB_HPP
#define OOBBEAM_OOB_HPP

#include <Eigen/Dense>
#include <utility>

#include "oobbeam/rng.hpp"

namespace oobbeam
{

// Elementwise magnitude of the (estimated) beamspace channel.
struct SpatialSpectrum
{
    Eigen::ArrayXXd mags; // m_rx x m_tx, entries >= 0
};

// Per-beamspace-entry activity probabilities, vectorized column-major to
// match the beamspace flattening. By construction min(p) = 0 and
// max(p) = j_p; degenerate marks a constant input spectrum (uniform fallback
// p = j_p / 2).
struct PriorVector
{
    Eigen::VectorXd p;
    double j_p = 1.0;
    bool degenerate = false;
};

// Orthogonal training matrix (m_tx x n_tr) with per-vector power
// p_per_vector: scaled identity columns, cycled when n_tr > m_tx.
Eigen::MatrixXcd default_training(Eigen::Index m_tx, Eigen::Index n_tr, double p_per_vector);

// Least-squares channel estimate from R = H T + V with i.i.d. CN(0, sigma2)
// noise entries: returns R T^* (T T^*)^{-1}. Throws on rank-deficient T.
Eigen::MatrixXcd estimate_sub6_channel(const Eigen::MatrixXcd& h_true,
                                       const Eigen::MatrixXcd& training, double sigma2, Rng& rng);

// |A_RX^* H A_TX|
SpatialSpectrum spatial_spectrum(const Eigen::MatrixXcd& h_hat, const Eigen::MatrixXcd& a_rx,
                                 const Eigen::MatrixXcd& a_tx);

// argmax over entries; ties break to the lowest (row, then column).
std::pair<Eigen::Index, Eigen::Index> dominant_indices(const SpatialSpectrum& spectrum);

// Bicubic (Keys, a = -1/2) magnitude-image scaling onto a larger grid with
// corner-aligned sample positions and edge replication; output clamped at 0.
Eigen::ArrayXXd scale_bicubic(const Eigen::ArrayXXd& src, Eigen::Index rows, Eigen::Index cols);

// p = j_p |g - min(g)| / max(g - min(g)) over the column-major vectorized
// spectrum; a constant spectrum degenerates to the uniform prior j_p / 2.
PriorVector prior_vector(const Eigen::ArrayXXd& scaled_spectrum, double j_p);

} // namespace oobbeam

#endif
