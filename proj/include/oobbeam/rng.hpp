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

#ifndef OOBBEAM_RNG_HPP
#define OOBBEAM_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace oobbeam
{

// splitmix64 finalizer; used to spread seeds and derive substreams
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic child seed for a labelled substream. Labels are folded in
// order, so {a, b} and {b, a} give unrelated streams.
inline std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = mix64(master);
    for (std::uint64_t label : path)
        s = mix64(s ^ mix64(label));
    return s;
}

// Thin wrapper around mt19937_64 with the draw helpers used across the
// library. One Rng per purpose; never share an instance across threads.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    double uniform(double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    // inclusive bounds
    long uniform_int(long lo, long hi)
    {
        return std::uniform_int_distribution<long>(lo, hi)(eng_);
    }

    double normal(double stddev)
    {
        return std::normal_distribution<double>(0.0, stddev)(eng_);
    }

    // circularly symmetric complex Gaussian CN(0, variance)
    std::complex<double> cnormal(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal(s);
        const double im = normal(s);
        return {re, im};
    }

    bool coin() { return (eng_() & 1ull) != 0ull; }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

inline Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(substream_seed(master, path));
}

} // namespace oobbeam

#endif
