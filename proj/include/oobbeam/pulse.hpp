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

#ifndef OOBBEAM_PULSE_HPP
#define OOBBEAM_PULSE_HPP

#include <cmath>

namespace oobbeam
{

inline constexpr double pi = 3.14159265358979323846;

// sin(pi x) / (pi x), 1 at x = 0
inline double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

// Raised-cosine impulse response with symbol period t_sym and roll-off beta,
// evaluated analytically at t seconds (no truncation). The removable
// singularity at |t| = t_sym / (2 beta) takes its limit value
// (pi / 4) sinc(1 / (2 beta)).
struct RaisedCosine
{
    double t_sym = 1.0;
    double beta = 1.0;

    double operator()(double t) const
    {
        const double x = t / t_sym;
        if (beta == 0.0)
            return sinc(x);
        const double bx = 2.0 * beta * x;
        const double denom = 1.0 - bx * bx;
        if (std::abs(denom) < 1e-8)
            return (pi / 4.0) * sinc(1.0 / (2.0 * beta));
        return sinc(x) * std::cos(pi * beta * x) / denom;
    }
};

} // namespace oobbeam

#endif
