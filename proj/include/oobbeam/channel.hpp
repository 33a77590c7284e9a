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

#ifndef OOBBEAM_CHANNEL_HPP
#define OOBBEAM_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "oobbeam/rng.hpp"
#include "oobbeam/ula.hpp"

namespace oobbeam
{

// Static description of one band's clustered channel and array geometry.
struct BandSpec
{
    double fc = 0.0;               // carrier frequency (Hz)
    double bandwidth = 0.0;        // Hz
    Eigen::Index n_clusters = 1;   // C
    Eigen::Index rays_per_cluster = 1;
    double tau_max = 0.0;          // max mean cluster delay (s)
    double sigma_tau_ray = 0.0;    // RMS intra-cluster delay spread (s)
    double sigma_aoa_ray = 0.0;    // RMS intra-cluster AoA spread (rad)
    double sigma_aod_ray = 0.0;    // RMS intra-cluster AoD spread (rad)
    Eigen::Index m_tx = 1;
    Eigen::Index m_rx = 1;
    double d = 0.5;                // element spacing (wavelengths)
    double pathloss_exponent = 3.0;
    Eigen::Index n_taps = 0;       // L, wideband rendering only
    Eigen::Index n_subcarriers = 0; // K, wideband rendering only
    Eigen::Index cp_len = 0;       // cyclic prefix; 0 selects K/4

    Ula tx_ula() const { return Ula{m_tx, d}; }
    Ula rx_ula() const { return Ula{m_rx, d}; }
};

// Throws std::invalid_argument on a malformed spec. wideband additionally
// checks the OFDM fields, including L <= cp_len + 1.
void validate(const BandSpec& spec, bool wideband);

// Half-open angle interval for the mean cluster AoAs/AoDs.
struct AngularDomain
{
    double lo = -pi / 2.0;
    double hi = pi / 2.0;
};

struct ClusterParamSet
{
    double tau = 0.0; // mean delay (s)
    double aoa = 0.0; // mean AoA (rad)
    double aod = 0.0; // mean AoD (rad)
};

struct Ray
{
    std::complex<double> alpha; // complex gain
    double tau = 0.0;            // delay relative to the cluster mean (s)
    double aoa_offset = 0.0;     // rad
    double aod_offset = 0.0;     // rad
};

struct ChannelRealization
{
    BandSpec band;
    std::vector<ClusterParamSet> clusters;
    std::vector<std::vector<Ray>> rays; // one list per cluster
    double pathloss = 1.0;              // rho_pl, linear scale
};

struct MultiBandRealization
{
    ChannelRealization sub6;
    ChannelRealization mmwave;
    std::vector<Eigen::Index> shared_cluster_indices;
    int n_clamped = 0; // perturbed parameters clipped back into bounds
};

// Boundary-aware random sign: +1 if x - w < y, else -1 if x + w > z, else
// an even coin flip. The first branch wins when both conditions hold.
int q_sign(double x, double w, double y, double z, Rng& rng);

// Replacement-set membership rule for a cluster at delay tau: a uniform draw
// xi lands the cluster in the set iff xi > sep * tau / tau_max.
inline bool replacement_member(double xi, double sep, double tau, double tau_max)
{
    return xi > sep * tau / tau_max;
}

// |f_a - f_b| / max(f_a, f_b)
inline double frequency_separation(double fa, double fb)
{
    return std::abs(fa - fb) / std::max(fa, fb);
}

struct GeneratedClusters
{
    std::vector<ClusterParamSet> band_a;
    std::vector<ClusterParamSet> band_b;
    std::vector<Eigen::Index> shared_indices; // positions in the tau-sorted lists
    int n_clamped = 0;
};

// Coupled two-band cluster generation: independent draws, tau-sorted
// replacement of the larger-delay-spread band's clusters by the other
// band's on the shared index set, then frequency-dependent perturbation of
// the same band. Draw order: band a clusters, band b clusters, band a
// replacement draws, band b replacement draws, then one (delta, signs)
// group per perturbed cluster.
GeneratedClusters generate_clusters(const BandSpec& spec_a, const BandSpec& spec_b,
                                    const AngularDomain& domain, Rng& rng);

// Intra-cluster rays: zero-mean uniform delays and angle offsets with the
// configured RMS spreads, gains CN(0, 1/R_c). Draw order per ray: tau, AoA
// offset, AoD offset, gain.
std::vector<std::vector<Ray>> generate_rays(const std::vector<ClusterParamSet>& clusters,
                                            const BandSpec& spec, Rng& rng);

// Free-space reference at 1 m plus exponent law: rho_pl(dB) =
// 20 log10(4 pi fc / c) + 10 n log10(d).
double pathloss_db(double distance_m, double fc_hz, double exponent);
double pathloss_linear(double distance_m, double fc_hz, double exponent);

} // namespace oobbeam

#endif
