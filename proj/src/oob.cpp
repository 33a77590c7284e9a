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

#include "oobbeam/oob.hpp"

#include <cmath>
#include <stdexcept>

namespace oobbeam
{

Eigen::MatrixXcd default_training(Eigen::Index m_tx, Eigen::Index n_tr, double p_per_vector)
{
    if (n_tr < m_tx)
        throw std::invalid_argument("default_training: need n_tr >= m_tx");
    if (p_per_vector <= 0.0)
        throw std::invalid_argument("default_training: training power must be positive");
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m_tx, n_tr);
    const double amp = std::sqrt(p_per_vector);
    for (Eigen::Index c = 0; c < n_tr; ++c)
        t(c % m_tx, c) = amp;
    return t;
}

Eigen::MatrixXcd estimate_sub6_channel(const Eigen::MatrixXcd& h_true,
                                       const Eigen::MatrixXcd& training, double sigma2, Rng& rng)
{
    if (training.rows() != h_true.cols())
        throw std::invalid_argument("estimate_sub6_channel: training row count mismatch");
    if (training.cols() < training.rows())
        throw std::invalid_argument("estimate_sub6_channel: need at least m_tx training vectors");

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(training);
    if (lu.rank() < training.rows())
        throw std::invalid_argument("estimate_sub6_channel: training matrix is rank deficient");

    Eigen::MatrixXcd received = h_true * training;
    if (sigma2 > 0.0)
        for (Eigen::Index c = 0; c < received.cols(); ++c)
            for (Eigen::Index r = 0; r < received.rows(); ++r)
                received(r, c) += rng.cnormal(sigma2);

    // LS estimate R T^* (T T^*)^{-1}; the Gram matrix is Hermitian positive
    // definite once full row rank is established
    const Eigen::MatrixXcd gram = training * training.adjoint();
    const Eigen::MatrixXcd rt = received * training.adjoint();
    return gram.ldlt().solve(rt.adjoint()).adjoint();
}

SpatialSpectrum spatial_spectrum(const Eigen::MatrixXcd& h_hat, const Eigen::MatrixXcd& a_rx,
                                 const Eigen::MatrixXcd& a_tx)
{
    if (a_rx.rows() != a_rx.cols() || a_tx.rows() != a_tx.cols())
        throw std::invalid_argument("spatial_spectrum: grid codebooks must be square");
    SpatialSpectrum s;
    s.mags = (a_rx.adjoint() * h_hat * a_tx).cwiseAbs().array();
    return s;
}

std::pair<Eigen::Index, Eigen::Index> dominant_indices(const SpatialSpectrum& spectrum)
{
    if (spectrum.mags.size() == 0)
        throw std::invalid_argument("dominant_indices: empty spectrum");
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < spectrum.mags.rows(); ++i)
        for (Eigen::Index j = 0; j < spectrum.mags.cols(); ++j)
            if (spectrum.mags(i, j) > spectrum.mags(bi, bj))
            {
                bi = i;
                bj = j;
            }
    return {bi, bj};
}

namespace
{

// Keys cubic convolution kernel, a = -1/2
double cubic_kernel(double x)
{
    x = std::abs(x);
    if (x <= 1.0)
        return ((1.5 * x - 2.5) * x) * x + 1.0;
    if (x < 2.0)
        return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

// One-dimensional pass along the columns of src onto n_out corner-aligned
// sample positions with edge replication.
Eigen::ArrayXXd cubic_pass_rows(const Eigen::ArrayXXd& src, Eigen::Index n_out)
{
    const Eigen::Index n_in = src.rows();
    Eigen::ArrayXXd out(n_out, src.cols());
    const double step =
        n_out > 1 ? static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1) : 0.0;
    for (Eigen::Index r = 0; r < n_out; ++r)
    {
        const double pos = static_cast<double>(r) * step;
        const Eigen::Index base = static_cast<Eigen::Index>(std::floor(pos));
        const double frac = pos - static_cast<double>(base);
        double w[4];
        w[0] = cubic_kernel(frac + 1.0);
        w[1] = cubic_kernel(frac);
        w[2] = cubic_kernel(1.0 - frac);
        w[3] = cubic_kernel(2.0 - frac);
        out.row(r).setZero();
        for (int t = 0; t < 4; ++t)
        {
            const Eigen::Index src_r =
                std::clamp(base - 1 + static_cast<Eigen::Index>(t), Eigen::Index{0}, n_in - 1);
            out.row(r) += w[t] * src.row(src_r);
        }
    }
    return out;
}

} // namespace

Eigen::ArrayXXd scale_bicubic(const Eigen::ArrayXXd& src, Eigen::Index rows, Eigen::Index cols)
{
    if (src.rows() < 1 || src.cols() < 1)
        throw std::invalid_argument("scale_bicubic: empty source");
    if (rows < src.rows() || cols < src.cols())
        throw std::invalid_argument("scale_bicubic: target grid must not be smaller");

    const Eigen::ArrayXXd vert = cubic_pass_rows(src, rows);
    Eigen::ArrayXXd out = cubic_pass_rows(vert.transpose(), cols).transpose();
    return out.max(0.0); // bicubic can undershoot; magnitudes stay non-negative
}

PriorVector prior_vector(const Eigen::ArrayXXd& scaled_spectrum, double j_p)
{
    if (!(j_p > 0.0 && j_p <= 1.0))
        throw std::invalid_argument("prior_vector: j_p must be in (0, 1]");
    if (scaled_spectrum.size() == 0)
        throw std::invalid_argument("prior_vector: empty spectrum");

    PriorVector out;
    out.j_p = j_p;
    const Eigen::VectorXd g = scaled_spectrum.reshaped().matrix();
    const double lo = g.minCoeff();
    const double hi = g.maxCoeff();
    if (!(hi - lo > 0.0))
    {
        out.degenerate = true;
        out.p = Eigen::VectorXd::Constant(g.size(), j_p / 2.0);
        return out;
    }
    // normalize first so the argmax entry is exactly 1 before the j_p scale
    const Eigen::ArrayXd normalized = (g.array() - lo).abs() / (hi - lo);
    out.p = (j_p * normalized).matrix();
    return out;
}

} // namespace oobbeam
