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

#include "oobbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oobbeam
{

void validate(const BandSpec& spec, bool wideband)
{
    if (spec.fc <= 0.0)
        throw std::invalid_argument("BandSpec: carrier frequency must be positive");
    if (spec.bandwidth <= 0.0)
        throw std::invalid_argument("BandSpec: bandwidth must be positive");
    if (spec.n_clusters < 1)
        throw std::invalid_argument("BandSpec: need at least one cluster");
    if (spec.rays_per_cluster < 1)
        throw std::invalid_argument("BandSpec: need at least one ray per cluster");
    if (spec.tau_max <= 0.0)
        throw std::invalid_argument("BandSpec: tau_max must be positive");
    if (spec.sigma_tau_ray < 0.0 || spec.sigma_aoa_ray < 0.0 || spec.sigma_aod_ray < 0.0)
        throw std::invalid_argument("BandSpec: RMS spreads must be non-negative");
    if (spec.m_tx < 1 || spec.m_rx < 1)
        throw std::invalid_argument("BandSpec: antenna counts must be >= 1");
    if (spec.d <= 0.0)
        throw std::invalid_argument("BandSpec: element spacing must be positive");
    if (wideband)
    {
        if (spec.n_taps < 1)
            throw std::invalid_argument("BandSpec: wideband channel needs n_taps >= 1");
        if (spec.n_subcarriers < spec.n_taps)
            throw std::invalid_argument("BandSpec: n_subcarriers must be >= n_taps");
        const Eigen::Index cp = spec.cp_len > 0 ? spec.cp_len : spec.n_subcarriers / 4;
        if (spec.n_taps > cp + 1)
            throw std::invalid_argument("BandSpec: n_taps exceeds cyclic prefix length + 1");
    }
}

int q_sign(double x, double w, double y, double z, Rng& rng)
{
    if (x - w < y)
        return 1;
    if (x + w > z)
        return -1;
    return rng.coin() ? 1 : -1;
}

namespace
{

// clamps v into [lo, hi]; returns 1 when clipping occurred
int clamp_count(double& v, double lo, double hi)
{
    if (v < lo)
    {
        v = lo;
        return 1;
    }
    if (v > hi)
    {
        v = hi;
        return 1;
    }
    return 0;
}

std::vector<ClusterParamSet> draw_band(const BandSpec& spec, const AngularDomain& dom, Rng& rng)
{
    std::vector<ClusterParamSet> clusters(static_cast<std::size_t>(spec.n_clusters));
    for (auto& c : clusters)
    {
        c.tau = rng.uniform(0.0, spec.tau_max);
        c.aoa = rng.uniform(dom.lo, dom.hi);
        c.aod = rng.uniform(dom.lo, dom.hi);
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const ClusterParamSet& a, const ClusterParamSet& b) { return a.tau < b.tau; });
    return clusters;
}

std::vector<char> draw_membership(const std::vector<ClusterParamSet>& clusters,
                                  const BandSpec& spec, double sep, Rng& rng)
{
    std::vector<char> in(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
        in[c] = replacement_member(rng.uniform(), sep, clusters[c].tau, spec.tau_max);
    return in;
}

} // namespace

GeneratedClusters generate_clusters(const BandSpec& spec_a, const BandSpec& spec_b,
                                    const AngularDomain& domain, Rng& rng)
{
    validate(spec_a, false);
    validate(spec_b, false);
    if (!(domain.lo < domain.hi))
        throw std::invalid_argument("generate_clusters: empty angular domain");

    const double sep = frequency_separation(spec_a.fc, spec_b.fc);

    GeneratedClusters out;
    out.band_a = draw_band(spec_a, domain, rng);
    out.band_b = draw_band(spec_b, domain, rng);

    const std::vector<char> in_a = draw_membership(out.band_a, spec_a, sep, rng);
    const std::vector<char> in_b = draw_membership(out.band_b, spec_b, sep, rng);

    const Eigen::Index n_common = std::min(spec_a.n_clusters, spec_b.n_clusters);
    for (Eigen::Index c = 0; c < n_common; ++c)
        if (in_a[static_cast<std::size_t>(c)] && in_b[static_cast<std::size_t>(c)])
            out.shared_indices.push_back(c);

    // The band with the larger delay spread inherits the other band's
    // clusters on the shared index set and then takes the perturbation.
    const bool perturb_b = spec_b.tau_max > spec_a.tau_max;
    std::vector<ClusterParamSet>& perturbed = perturb_b ? out.band_b : out.band_a;
    const std::vector<ClusterParamSet>& kept = perturb_b ? out.band_a : out.band_b;
    const BandSpec& pspec = perturb_b ? spec_b : spec_a;

    for (Eigen::Index c : out.shared_indices)
        perturbed[static_cast<std::size_t>(c)] = kept[static_cast<std::size_t>(c)];

    for (auto& c : perturbed)
    {
        const double delta = rng.uniform();
        // The delay sign check runs in tau/tau_max coordinates so that the
        // step size is bounded by delta, same as for the angles.
        const double s_tau =
            q_sign(c.tau / pspec.tau_max, delta, 0.0, 1.0, rng) * sep * c.tau * delta;
        const double angle_step = sep * (c.tau / pspec.tau_max) * delta;
        const double s_aoa = q_sign(c.aoa, delta, domain.lo, domain.hi, rng) * angle_step;
        const double s_aod = q_sign(c.aod, delta, domain.lo, domain.hi, rng) * angle_step;
        c.tau += s_tau;
        c.aoa += s_aoa;
        c.aod += s_aod;
        out.n_clamped += clamp_count(c.tau, 0.0, pspec.tau_max);
        out.n_clamped += clamp_count(c.aoa, domain.lo, domain.hi);
        out.n_clamped += clamp_count(c.aod, domain.lo, domain.hi);
    }
    return out;
}

std::vector<std::vector<Ray>> generate_rays(const std::vector<ClusterParamSet>& clusters,
                                            const BandSpec& spec, Rng& rng)
{
    // zero-mean uniform with RMS sigma has support width sigma * sqrt(12)
    const double half_tau = spec.sigma_tau_ray * std::sqrt(12.0) / 2.0;
    const double half_aoa = spec.sigma_aoa_ray * std::sqrt(12.0) / 2.0;
    const double half_aod = spec.sigma_aod_ray * std::sqrt(12.0) / 2.0;
    const double gain_var = 1.0 / static_cast<double>(spec.rays_per_cluster);

    std::vector<std::vector<Ray>> rays(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
    {
        rays[c].resize(static_cast<std::size_t>(spec.rays_per_cluster));
        for (auto& ray : rays[c])
        {
            ray.tau = rng.uniform(-half_tau, half_tau);
            ray.aoa_offset = rng.uniform(-half_aoa, half_aoa);
            ray.aod_offset = rng.uniform(-half_aod, half_aod);
            ray.alpha = rng.cnormal(gain_var);
        }
    }
    return rays;
}

double pathloss_db(double distance_m, double fc_hz, double exponent)
{
    if (distance_m <= 0.0)
        throw std::invalid_argument("pathloss: distance must be positive");
    constexpr double c0 = 299792458.0;
    const double fspl_1m = 20.0 * std::log10(4.0 * pi * fc_hz / c0);
    return fspl_1m + 10.0 * exponent * std::log10(distance_m);
}

double pathloss_linear(double distance_m, double fc_hz, double exponent)
{
    return std::pow(10.0, pathloss_db(distance_m, fc_hz, exponent) / 10.0);
}

} // namespace oobbeam
