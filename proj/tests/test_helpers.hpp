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

// Straight-loop reference implementations. These stay deliberately naive and
// independent of the library's evaluation order so they can serve as oracles.

#ifndef OOBBEAM_TEST_HELPERS_HPP
#define OOBBEAM_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "oobbeam/channel.hpp"
#include "oobbeam/pulse.hpp"
#include "oobbeam/rng.hpp"
#include "oobbeam/ula.hpp"

namespace oobbeam::testing
{

inline Eigen::MatrixXcd naive_kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index ai = 0; ai < a.rows(); ++ai)
        for (Eigen::Index aj = 0; aj < a.cols(); ++aj)
            for (Eigen::Index bi = 0; bi < b.rows(); ++bi)
                for (Eigen::Index bj = 0; bj < b.cols(); ++bj)
                    out(ai * b.rows() + bi, aj * b.cols() + bj) = a(ai, aj) * b(bi, bj);
    return out;
}

inline Eigen::MatrixXcd random_cmatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = rng.cnormal(1.0);
    return m;
}

inline ChannelRealization random_realization(BandSpec spec, double pathloss, Rng& rng)
{
    ChannelRealization ch;
    ch.band = spec;
    ch.pathloss = pathloss;
    ch.clusters.resize(static_cast<std::size_t>(spec.n_clusters));
    for (auto& c : ch.clusters)
    {
        c.tau = rng.uniform(0.0, spec.tau_max);
        c.aoa = rng.uniform(-pi / 2, pi / 2);
        c.aod = rng.uniform(-pi / 2, pi / 2);
    }
    ch.rays = generate_rays(ch.clusters, spec, rng);
    return ch;
}

// element-by-element double-sum render, one tap at a time
inline std::vector<Eigen::MatrixXcd> naive_render_taps(const ChannelRealization& ch,
                                                       const RaisedCosine& pulse, double ts)
{
    const Ula rx = ch.band.rx_ula();
    const Ula tx = ch.band.tx_ula();
    const double scale =
        std::sqrt(static_cast<double>(ch.band.m_rx * ch.band.m_tx) / ch.pathloss);
    std::vector<Eigen::MatrixXcd> taps;
    for (Eigen::Index l = 0; l < ch.band.n_taps; ++l)
    {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ch.band.m_rx, ch.band.m_tx);
        for (std::size_t c = 0; c < ch.clusters.size(); ++c)
            for (const Ray& ray : ch.rays[c])
            {
                const Eigen::VectorXcd a_rx =
                    array_response(rx, ch.clusters[c].aoa + ray.aoa_offset);
                const Eigen::VectorXcd a_tx =
                    array_response(tx, ch.clusters[c].aod + ray.aod_offset);
                const std::complex<double> g =
                    ray.alpha *
                    pulse(static_cast<double>(l) * ts - ch.clusters[c].tau - ray.tau);
                for (Eigen::Index i = 0; i < ch.band.m_rx; ++i)
                    for (Eigen::Index j = 0; j < ch.band.m_tx; ++j)
                        h(i, j) += scale * g * a_rx[i] * std::conj(a_tx[j]);
            }
        taps.push_back(std::move(h));
    }
    return taps;
}

inline Eigen::MatrixXcd naive_freq_at(const std::vector<Eigen::MatrixXcd>& taps,
                                      Eigen::Index n_fft, Eigen::Index k)
{
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(taps[0].rows(), taps[0].cols());
    for (std::size_t l = 0; l < taps.size(); ++l)
        h += taps[l] * std::polar(1.0, -2.0 * pi * static_cast<double>(k) *
                                           static_cast<double>(l) /
                                           static_cast<double>(n_fft));
    return h;
}

inline Eigen::MatrixXcd naive_narrowband(const ChannelRealization& ch, const RaisedCosine& pulse)
{
    const Ula rx = ch.band.rx_ula();
    const Ula tx = ch.band.tx_ula();
    const double scale =
        std::sqrt(static_cast<double>(ch.band.m_rx * ch.band.m_tx) / ch.pathloss);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ch.band.m_rx, ch.band.m_tx);
    for (std::size_t c = 0; c < ch.clusters.size(); ++c)
        for (const Ray& ray : ch.rays[c])
        {
            const Eigen::VectorXcd a_rx = array_response(rx, ch.clusters[c].aoa + ray.aoa_offset);
            const Eigen::VectorXcd a_tx = array_response(tx, ch.clusters[c].aod + ray.aod_offset);
            const std::complex<double> g = ray.alpha * pulse(-ch.clusters[c].tau - ray.tau);
            for (Eigen::Index i = 0; i < ch.band.m_rx; ++i)
                for (Eigen::Index j = 0; j < ch.band.m_tx; ++j)
                    h(i, j) += scale * g * a_rx[i] * std::conj(a_tx[j]);
        }
    return h;
}

// per-column projection magnitudes, scalar loops only
inline Eigen::VectorXd naive_scores(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& y)
{
    Eigen::VectorXd s(psi.cols());
    for (Eigen::Index c = 0; c < psi.cols(); ++c)
    {
        std::complex<double> acc = 0.0;
        for (Eigen::Index r = 0; r < psi.rows(); ++r)
            acc += std::conj(psi(r, c)) * y[r];
        s[c] = std::abs(acc);
    }
    return s;
}

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline double rel_err(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want)
{
    return (got - want).norm() / std::max(1e-300, want.norm());
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want)
{
    return (got - want).norm() / std::max(1e-300, want.norm());
}

} // namespace oobbeam::testing

#endif
