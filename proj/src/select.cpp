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

#include "oobbeam/select.hpp"

#include <cmath>
#include <stdexcept>

#include "oobbeam/linalg.hpp"

namespace oobbeam
{

const char* to_string(SelectMethod method)
{
    switch (method)
    {
    case SelectMethod::omp:
        return "omp";
    case SelectMethod::lw_omp:
        return "lw_omp";
    case SelectMethod::somp:
        return "somp";
    case SelectMethod::lw_somp:
        return "lw_somp";
    }
    return "unknown";
}

Eigen::VectorXd logit_weights(const PriorVector& prior, double epsilon_p, double j_w)
{
    if (!(epsilon_p > 0.0 && epsilon_p < 0.5))
        throw std::invalid_argument("logit_weights: epsilon_p must be in (0, 1/2)");
    Eigen::VectorXd w(prior.p.size());
    for (Eigen::Index r = 0; r < prior.p.size(); ++r)
    {
        const double p = std::clamp(prior.p[r], epsilon_p, 1.0 - epsilon_p);
        w[r] = j_w * std::log(p / (1.0 - p));
    }
    return w;
}

namespace
{

Eigen::VectorXd projection_scores(const MeasurementSet& ms, Eigen::Index column)
{
    return (ms.psi.adjoint() * ms.y.col(column)).cwiseAbs();
}

Eigen::VectorXd summed_scores(const MeasurementSet& ms)
{
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(ms.psi.cols());
    for (Eigen::Index c = 0; c < ms.y.cols(); ++c)
        scores += projection_scores(ms, c);
    return scores;
}

SelectionResult finish(const MeasurementSet& ms, Eigen::VectorXd scores, SelectMethod method,
                       double j_w_used)
{
    SelectionResult out;
    out.pair = BeamPair::from_flat(argmax_lowest(scores), ms.m_rx);
    out.scores = std::move(scores);
    out.method = method;
    out.codebook = ms.f.kind;
    out.j_w_used = j_w_used;
    return out;
}

SelectionResult weighted(const MeasurementSet& ms, Eigen::VectorXd base, SelectMethod method,
                         const PriorVector& prior, const WeightingConfig& cfg)
{
    if (prior.p.size() != ms.psi.cols())
        throw std::invalid_argument("weighted selection: prior length mismatch");
    const double j_w = cfg.j_w ? *cfg.j_w : base.mean();
    base += logit_weights(prior, cfg.epsilon_p, j_w);
    return finish(ms, std::move(base), method, j_w);
}

} // namespace

SelectionResult omp_select(const MeasurementSet& ms, Eigen::Index k)
{
    return finish(ms, projection_scores(ms, ms.column_of(k)), SelectMethod::omp, 0.0);
}

SelectionResult lw_omp_select(const MeasurementSet& ms, Eigen::Index k, const PriorVector& prior,
                              const WeightingConfig& w)
{
    return weighted(ms, projection_scores(ms, ms.column_of(k)), SelectMethod::lw_omp, prior, w);
}

SelectionResult somp_select(const MeasurementSet& ms)
{
    return finish(ms, summed_scores(ms), SelectMethod::somp, 0.0);
}

SelectionResult lw_somp_select(const MeasurementSet& ms, const PriorVector& prior,
                               const WeightingConfig& w)
{
    return weighted(ms, summed_scores(ms), SelectMethod::lw_somp, prior, w);
}

} // namespace oobbeam
