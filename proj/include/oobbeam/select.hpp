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

#ifndef OOBBEAM_SELECT_HPP
#define OOBBEAM_SELECT_HPP

#include <Eigen/Dense>
#include <optional>

#include "oobbeam/frontend.hpp"
#include "oobbeam/oob.hpp"

namespace oobbeam
{

// Additive logit weighting w(p) = j_w log(p / (1 - p)) with probabilities
// clamped into [epsilon_p, 1 - epsilon_p]. j_w empty selects the
// scale-matching default: the mean of the unweighted score vector.
struct WeightingConfig
{
    std::optional<double> j_w;
    double epsilon_p = 1e-3;
};

enum class SelectMethod
{
    omp,
    lw_omp,
    somp,
    lw_somp
};

const char* to_string(SelectMethod method);

struct SelectionResult
{
    BeamPair pair;
    Eigen::VectorXd scores; // argmax objective, length m_rx * m_tx
    SelectMethod method = SelectMethod::omp;
    CodebookKind codebook = CodebookKind::random_quantized;
    double j_w_used = 0.0; // 0 for the unweighted methods
};

// Single-step greedy selection on one subcarrier:
// scores_r = |Psi_{:,r}^* y[k]|.
SelectionResult omp_select(const MeasurementSet& ms, Eigen::Index k);

// OMP scores plus logit weights from the prior.
SelectionResult lw_omp_select(const MeasurementSet& ms, Eigen::Index k, const PriorVector& prior,
                              const WeightingConfig& w);

// Joint selection over all probed subcarriers:
// scores_r = sum_k |Psi_{:,r}^* y[k]| (fixed ascending-k summation order).
SelectionResult somp_select(const MeasurementSet& ms);

// SOMP scores plus logit weights from the prior.
SelectionResult lw_somp_select(const MeasurementSet& ms, const PriorVector& prior,
                               const WeightingConfig& w);

// Clamped log-odds weights for a prior; exposed for tests and calibration.
Eigen::VectorXd logit_weights(const PriorVector& prior, double epsilon_p, double j_w);

} // namespace oobbeam

#endif
