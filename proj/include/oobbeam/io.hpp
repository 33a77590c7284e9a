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

#ifndef OOBBEAM_IO_HPP
#define OOBBEAM_IO_HPP

#include <Eigen/Dense>
#include <string>

#include <json.hpp>

#include "oobbeam/channel.hpp"
#include "oobbeam/codebook.hpp"

namespace oobbeam
{

// Debug dump of one coupled realization (clusters, rays, pathloss) for
// cross-implementation comparison.
nlohmann::json realization_to_json(const MultiBandRealization& mb);

// Codebook as JSON with complex entries encoded as [re, im] pairs, row-major.
nlohmann::json codebook_to_json(const Codebook& cb);

// Deterministically formatted numeric CSV matrix.
std::string matrix_csv(const Eigen::ArrayXXd& m);

void write_text_file(const std::string& path, const std::string& contents);

// Shortest round-trippable decimal form, stable across runs.
std::string format_double(double v);

} // namespace oobbeam

#endif
