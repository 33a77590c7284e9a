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

#include "oobbeam/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oobbeam
{

const char* to_string(CodebookKind kind)
{
    switch (kind)
    {
    case CodebookKind::dft:
        return "dft";
    case CodebookKind::random_quantized:
        return "random_quantized";
    case CodebookKind::structured:
        return "structured";
    case CodebookKind::deterministic_grid:
        return "deterministic_grid";
    }
    return "unknown";
}

Codebook dft_codebook(const Ula& ula)
{
    const BeamGrid grid = beam_grid(ula);
    Codebook cb;
    cb.kind = CodebookKind::dft;
    cb.phase_bits = static_cast<int>(std::lround(std::log2(static_cast<double>(ula.m))));
    cb.matrix.resize(ula.m, ula.m);
    for (Eigen::Index c = 0; c < ula.m; ++c)
        cb.matrix.col(c) = array_response(ula, grid.theta[c]);
    return cb;
}

Codebook random_codebook(const Ula& ula, Eigen::Index n_beams, int phase_bits, Rng& rng)
{
    if (n_beams < 1)
        throw std::invalid_argument("random_codebook: n_beams must be >= 1");
    if (phase_bits < 1 || phase_bits > 30)
        throw std::invalid_argument("random_codebook: phase_bits out of range");

    const long n_levels = 1L << phase_bits;
    const double scale = 1.0 / std::sqrt(static_cast<double>(ula.m));
    Codebook cb;
    cb.kind = CodebookKind::random_quantized;
    cb.phase_bits = phase_bits;
    cb.matrix.resize(ula.m, n_beams);
    for (Eigen::Index c = 0; c < n_beams; ++c)
        for (Eigen::Index r = 0; r < ula.m; ++r)
        {
            const long q = rng.uniform_int(0, n_levels - 1);
            cb.matrix(r, c) = std::polar(scale, 2.0 * pi * static_cast<double>(q) /
                                                    static_cast<double>(n_levels));
        }
    return cb;
}

std::vector<Eigen::Index> grid_beams_in_bin(const Ula& ula, Eigen::Index bin, Eigen::Index m_oob)
{
    if (bin < 0 || bin >= m_oob)
        throw std::invalid_argument("grid_beams_in_bin: bin index out of range");

    const double coarse = static_cast<double>(m_oob);
    const double center = (2.0 * static_cast<double>(bin) + 1.0 - coarse) / (2.0 * coarse);
    const double lo = center - 1.0 / (2.0 * coarse);
    const double hi = center + 1.0 / (2.0 * coarse);

    const BeamGrid grid = beam_grid(ula);
    std::vector<Eigen::Index> beams;
    for (Eigen::Index j = 0; j < ula.m; ++j)
        if (grid.nu[j] >= lo && grid.nu[j] < hi)
            beams.push_back(j);
    return beams;
}

std::vector<Eigen::Index> top_row_norm_indices(const Eigen::MatrixXcd& corr, Eigen::Index n)
{
    if (n < 0 || n > corr.rows())
        throw std::invalid_argument("top_row_norm_indices: n out of range");
    const Eigen::VectorXd norms = corr.rowwise().norm();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(corr.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (norms[a] != norms[b])
            return norms[a] > norms[b];
        return a < b;
    });
    idx.resize(static_cast<std::size_t>(n));
    return idx;
}

Codebook structured_codebook(const Ula& ula, Eigen::Index dominant_bin, Eigen::Index m_oob,
                             Eigen::Index n_beams, Eigen::Index super_size, int phase_bits,
                             Rng& rng)
{
    if (super_size <= 0)
        super_size = 4 * std::max(n_beams, ula.m);
    if (n_beams > super_size)
        throw std::invalid_argument("structured_codebook: n_beams exceeds super-codebook size");

    const std::vector<Eigen::Index> bin_beams = grid_beams_in_bin(ula, dominant_bin, m_oob);
    if (bin_beams.empty())
        // No grid beam falls in the requested bin; degrade to unstructured training.
        return random_codebook(ula, n_beams, phase_bits, rng);

    const Codebook grid_cb = dft_codebook(ula);
    Eigen::MatrixXcd det(ula.m, static_cast<Eigen::Index>(bin_beams.size()));
    for (std::size_t i = 0; i < bin_beams.size(); ++i)
        det.col(static_cast<Eigen::Index>(i)) = grid_cb.matrix.col(bin_beams[i]);

    const Codebook super = random_codebook(ula, super_size, phase_bits, rng);
    const Eigen::MatrixXcd corr = super.matrix.adjoint() * det; // super_size x |bin|
    const std::vector<Eigen::Index> keep = top_row_norm_indices(corr, n_beams);

    Codebook cb;
    cb.kind = CodebookKind::structured;
    cb.phase_bits = phase_bits;
    cb.matrix.resize(ula.m, n_beams);
    for (std::size_t i = 0; i < keep.size(); ++i)
        cb.matrix.col(static_cast<Eigen::Index>(i)) = super.matrix.col(keep[i]);
    return cb;
}

} // namespace oobbeam
