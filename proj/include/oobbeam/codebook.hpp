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

#ifndef OOBBEAM_CODEBOOK_HPP
#define OOBBEAM_CODEBOOK_HPP

#include <Eigen/Dense>
#include <vector>

#include "oobbeam/rng.hpp"
#include "oobbeam/ula.hpp"

namespace oobbeam
{

enum class CodebookKind
{
    dft,
    random_quantized,
    structured,
    deterministic_grid
};

const char* to_string(CodebookKind kind);

// Matrix of unit-modulus beamforming vectors, one codeword per column.
// Every entry has modulus 1/sqrt(m); quantized kinds draw phases from
// {2 pi q / 2^phase_bits}.
struct Codebook
{
    Eigen::MatrixXcd matrix;
    CodebookKind kind = CodebookKind::dft;
    int phase_bits = 0;

    Eigen::Index m() const { return matrix.rows(); }
    Eigen::Index n_beams() const { return matrix.cols(); }
};

// Grid codebook with columns a(theta_m) on the beamspace grid; unitary.
Codebook dft_codebook(const Ula& ula);

// Training codebook with i.i.d. phases uniform over the 2^phase_bits
// quantized angles.
Codebook random_codebook(const Ula& ula, Eigen::Index n_beams, int phase_bits, Rng& rng);

// Indices of the grid beams of `ula` whose normalized spatial angle falls in
// bin `bin` (0-based) of a coarser m_oob-point grid. The bin is the half-open
// interval of width 1/m_oob centred on the coarse grid angle.
std::vector<Eigen::Index> grid_beams_in_bin(const Ula& ula, Eigen::Index bin, Eigen::Index m_oob);

// Row indices of the n largest row 2-norms of corr, best first
// (ties break to the lowest index).
std::vector<Eigen::Index> top_row_norm_indices(const Eigen::MatrixXcd& corr, Eigen::Index n);

// Random training codebook tailored to a dominant out-of-band angle bin:
// draws a super-codebook of super_size random codewords and keeps the
// n_beams codewords most correlated with the grid beams inside the bin.
// super_size <= 0 selects the default 4 * max(n_beams, m). Falls back to a
// plain random codebook when no grid beam lands in the bin.
Codebook structured_codebook(const Ula& ula, Eigen::Index dominant_bin, Eigen::Index m_oob,
                             Eigen::Index n_beams, Eigen::Index super_size, int phase_bits,
                             Rng& rng);

} // namespace oobbeam

#endif
