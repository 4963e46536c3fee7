// Copyright 2026 The qgad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qgad/fixedpoint.hpp"
#include "qgad/rng.hpp"

namespace qgad {

/// Uniform random magnitudes in [0, 2^bits) with random signs. Zero
/// magnitudes carry a non-negative sign.
QuantizedDataset random_quantized_dataset(std::size_t rows, std::size_t cols,
                                          unsigned bits, StreamRng& rng);

/// Rows drawn from N(mean, L L^T) given the lower factor L. Coordinates are
/// clipped to [-limit, limit] with limit < 1.
std::vector<std::vector<double>> gaussian_rows(std::size_t rows,
                                               const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& factor,
                                               StreamRng& rng,
                                               double limit = 0.99);

}  // namespace qgad
