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

#include <doctest.h>

#include <cmath>

#include "oobbeam/channel.hpp"
#include "oobbeam/config.hpp"
#include "test_helpers.hpp"

using namespace oobbeam;

namespace
{

BandSpec sub6_spec() { return default_config().sub6; }
BandSpec mmwave_spec() { return default_config().mmwave; }

} // namespace

TEST_CASE("q_sign branch behaviour")
{
    Rng rng(7);
    CHECK(q_sign(0.1, 0.5, 0.0, 1.0, rng) == 1);
    CHECK(q_sign(0.9, 0.5, 0.0, 1.0, rng) == -1);
    // the lower-bound branch wins when both boundary conditions hold
    CHECK(q_sign(0.3, 0.5, 0.0, 0.6, rng) == 1);

    // interior point: even coin
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        acc += q_sign(0.5, 0.1, 0.0, 1.0, rng);
    CHECK(std::abs(acc / n) < 0.02);
}

TEST_CASE("pathloss free-space reference and exponent law")
{
    const double fc = 28e9;
    const double fspl = 20.0 * std::log10(4.0 * pi * fc / 299792458.0);
    CHECK(pathloss_db(1.0, fc, 3.0) == doctest::Approx(fspl).epsilon(1e-12));

    const double ratio = pathloss_linear(80.0, fc, 3.0) / pathloss_linear(40.0, fc, 3.0);
    CHECK(ratio == doctest::Approx(8.0).epsilon(1e-12));

    CHECK_THROWS_AS(pathloss_db(0.0, fc, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(pathloss_db(-2.0, fc, 3.0), std::invalid_argument);
}

TEST_CASE("frequency separation factor")
{
    CHECK(frequency_separation(3.5e9, 28e9) == doctest::Approx(24.5 / 28.0).epsilon(1e-15));
    CHECK(frequency_separation(28e9, 3.5e9) == doctest::Approx(24.5 / 28.0).epsilon(1e-15));
    CHECK(frequency_separation(2e9, 2e9) == 0.0);
}

TEST_CASE("zero frequency separation returns identical cluster sets")
{
    BandSpec a = sub6_spec();
    BandSpec b = a; // same carrier, same delay spread
    Rng rng(123);
    const GeneratedClusters gen = generate_clusters(a, b, AngularDomain{}, rng);

    REQUIRE(gen.band_a.size() == gen.band_b.size());
    CHECK(gen.shared_indices.size() == gen.band_a.size());
    for (std::size_t c = 0; c < gen.band_a.size(); ++c)
    {
        CHECK(gen.band_a[c].tau == gen.band_b[c].tau);
        CHECK(gen.band_a[c].aoa == gen.band_b[c].aoa);
        CHECK(gen.band_a[c].aod == gen.band_b[c].aod);
    }
}

TEST_CASE("replacement membership probability matches 1 - min(1, s tau / tau_max)")
{
    const double sep = 24.5 / 28.0;
    const double tau_max = 48e-9;
    Rng rng(99);
    const int n = 100000;
    for (double frac : {0.1, 0.5, 0.9})
    {
        const double tau = frac * tau_max;
        int hits = 0;
        for (int i = 0; i < n; ++i)
            hits += replacement_member(rng.uniform(), sep, tau, tau_max) ? 1 : 0;
        const double expect = 1.0 - std::min(1.0, sep * frac);
        CHECK(std::abs(static_cast<double>(hits) / n - expect) < 0.01);
    }
}

TEST_CASE("early clusters co-occur more often than late clusters")
{
    const BandSpec a = sub6_spec();
    const BandSpec b = mmwave_spec();
    const Eigen::Index last = std::min(a.n_clusters, b.n_clusters) - 1;
    Rng rng(2024);
    int first_hits = 0;
    int last_hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        const GeneratedClusters gen = generate_clusters(a, b, AngularDomain{}, rng);
        for (Eigen::Index c : gen.shared_indices)
        {
            if (c == 0)
                ++first_hits;
            if (c == last)
                ++last_hits;
        }
    }
    CHECK(first_hits > last_hits);
    // tau -> 0 pushes membership probability to 1; the earliest slot should
    // co-occur in a clear majority of draws at this separation
    CHECK(static_cast<double>(first_hits) / n > 0.5);
}

TEST_CASE("sub-6 band takes the replacement and perturbation at section-V delay spreads")
{
    BandSpec a = sub6_spec();   // tau_max 57 ns
    BandSpec b = mmwave_spec(); // tau_max 48 ns
    REQUIRE(a.tau_max > b.tau_max);

    Rng rng(5);
    const GeneratedClusters gen = generate_clusters(a, b, AngularDomain{}, rng);
    // the smaller-delay-spread band keeps its sorted order untouched
    for (std::size_t c = 1; c < gen.band_b.size(); ++c)
        CHECK(gen.band_b[c - 1].tau <= gen.band_b[c].tau);
    for (const auto& c : gen.band_a)
    {
        CHECK(c.tau >= 0.0);
        CHECK(c.tau <= a.tau_max);
        CHECK(c.aoa >= -pi / 2);
        CHECK(c.aoa <= pi / 2);
    }
}

TEST_CASE("perturbation magnitude scales with frequency separation")
{
    // with one cluster per band and equal delay spreads, a shared index
    // means the bands matched exactly before the perturbation, so the
    // residual offset is the perturbation itself
    BandSpec a = sub6_spec();
    a.n_clusters = 1;
    BandSpec b = a;
    const double f_ref = a.fc;

    const auto mean_offset = [&](double sep_target, std::uint64_t seed) {
        BandSpec hi = b;
        hi.fc = f_ref / (1.0 - sep_target); // gives |fa-fb|/max = sep_target
        Rng rng(seed);
        double acc = 0.0;
        int count = 0;
        for (int i = 0; i < 40000; ++i)
        {
            const GeneratedClusters gen = generate_clusters(a, hi, AngularDomain{}, rng);
            if (gen.shared_indices.empty())
                continue;
            acc += std::abs(gen.band_a[0].tau - gen.band_b[0].tau);
            ++count;
        }
        return acc / count;
    };

    const double m1 = mean_offset(0.05, 11);
    const double m2 = mean_offset(0.10, 11);
    CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("ray statistics match the configured spreads")
{
    BandSpec spec = mmwave_spec();
    spec.n_clusters = 1;
    spec.rays_per_cluster = 1000000;
    const std::vector<ClusterParamSet> clusters{{10e-9, 0.1, -0.2}};

    Rng rng(42);
    const auto rays = generate_rays(clusters, spec, rng);
    REQUIRE(rays.size() == 1);

    double aoa_sq = 0.0;
    double tau_abs_max = 0.0;
    double gain_sq = 0.0;
    for (const Ray& r : rays[0])
    {
        aoa_sq += r.aoa_offset * r.aoa_offset;
        tau_abs_max = std::max(tau_abs_max, std::abs(r.tau));
        gain_sq += std::norm(r.alpha);
    }
    const double n = static_cast<double>(rays[0].size());
    const double aoa_rms = std::sqrt(aoa_sq / n);
    CHECK(std::abs(aoa_rms - 0.035) / 0.035 < 0.01); // 2 degrees

    // uniform support width tau_max/20 for sigma = tau_max/(20 sqrt(12))
    const double half_support = spec.tau_max / 40.0;
    CHECK(tau_abs_max <= half_support * (1.0 + 1e-12));
    CHECK(tau_abs_max > 0.99 * half_support);

    // E[|alpha|^2] = 1 / R_c with R_c equal to the draw count here
    CHECK(gain_sq / n == doctest::Approx(1.0 / n).epsilon(0.02));
}

TEST_CASE("zero angle spread collapses rays onto the cluster mean")
{
    BandSpec spec = mmwave_spec();
    spec.sigma_aoa_ray = 0.0;
    spec.sigma_aod_ray = 0.0;
    const std::vector<ClusterParamSet> clusters{{10e-9, 0.3, -0.4}};
    Rng rng(3);
    const auto rays = generate_rays(clusters, spec, rng);
    for (const Ray& r : rays[0])
    {
        CHECK(r.aoa_offset == 0.0);
        CHECK(r.aod_offset == 0.0);
    }
}

TEST_CASE("band spec validation rejects bad configurations")
{
    BandSpec s = mmwave_spec();
    CHECK_NOTHROW(validate(s, true));

    BandSpec bad = s;
    bad.n_clusters = 0;
    CHECK_THROWS_AS(validate(bad, false), std::invalid_argument);

    bad = s;
    bad.tau_max = 0.0;
    CHECK_THROWS_AS(validate(bad, false), std::invalid_argument);

    bad = s;
    bad.n_taps = 70; // over cp_len + 1 = 65
    CHECK_THROWS_AS(validate(bad, true), std::invalid_argument);

    bad = s;
    bad.n_taps = 300; // over n_subcarriers
    CHECK_THROWS_AS(validate(bad, true), std::invalid_argument);
}
