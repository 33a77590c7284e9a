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

#ifndef OOBBEAM_ULA_HPP
#define OOBBEAM_ULA_HPP

#include <Eigen/Dense>
#include <stdexcept>

#include "oobbeam/pulse.hpp"

namespace oobbeam
{

// Uniform linear array of isotropic elements, spacing in wavelengths.
struct Ula
{
    Eigen::Index m = 1;
    double d = 0.5;
};

// a(theta) = (1/sqrt(M)) [1, e^{j 2 pi d sin th}, ..., e^{j 2 pi (M-1) d sin th}]^T
inline Eigen::VectorXcd array_response(const Ula& ula, double angle_rad)
{
    if (ula.m < 1)
        throw std::invalid_argument("array_response: antenna count must be >= 1");
    const double step = 2.0 * pi * ula.d * std::sin(angle_rad);
    const double scale = 1.0 / std::sqrt(static_cast<double>(ula.m));
    Eigen::VectorXcd a(ula.m);
    for (Eigen::Index p = 0; p < ula.m; ++p)
        a[p] = std::polar(scale, step * static_cast<double>(p));
    return a;
}

// Uniform beamspace grid: nu_m = (2m - 1 - M) / (2M) for m in [M] and the
// physical angles theta_m = asin(nu_m / d).
struct BeamGrid
{
    Eigen::ArrayXd nu;    // normalized spatial angles
    Eigen::ArrayXd theta; // physical angles (rad)
};

inline BeamGrid beam_grid(const Ula& ula)
{
    BeamGrid g;
    g.nu.resize(ula.m);
    g.theta.resize(ula.m);
    const double m2 = 2.0 * static_cast<double>(ula.m);
    for (Eigen::Index i = 0; i < ula.m; ++i)
    {
        // 1-based grid index is i + 1
        g.nu[i] = (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(ula.m)) / m2;
        const double arg = g.nu[i] / ula.d;
        if (std::abs(arg) > 1.0)
            throw std::invalid_argument("beam_grid: |nu/d| > 1, grid angle undefined");
        g.theta[i] = std::asin(arg);
    }
    return g;
}

} // namespace oobbeam

#endif
