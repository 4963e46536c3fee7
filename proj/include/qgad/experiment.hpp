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

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "qgad/fixedpoint.hpp"
#include "qgad/statevector.hpp"

namespace qgad {

struct ScalingPoint {
  std::uint64_t shots = 0;
  std::size_t element = 0;
  double rmse = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  /// Per-feature least-squares slope of log RMSE against log shots. NaN when
  /// fewer than two points have a nonzero RMSE.
  std::vector<double> slopes;
  /// Mean of the finite per-feature slopes.
  double slope = 0.0;
};

/// Throws UsageError unless the grid has >= 3 distinct positive points
/// spanning >= 2 decades and repeats >= 20.
void validate_scaling_request(std::span<const std::uint64_t> grid,
                              std::size_t repeats);

/// Least-squares slope of log(y) on log(x) over pairs with x, y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Shot-mode mean-magnitude RMSE against the exact |mu_j| for every feature
/// and grid point, `repeats` independently seeded runs each.
ScalingResult run_shot_scaling(const QuantizedDataset& dataset,
                               std::span<const std::uint64_t> grid,
                               std::size_t repeats, std::uint64_t seed,
                               unsigned qubit_cap = kDefaultQubitCap);

/// "shots,element,rmse,slope" header plus one row per point.
void write_scaling_csv(std::ostream& out, const ScalingResult& result);

/// M = 32, D = 2 clipped Gaussian sample used when no input is given.
QuantizedDataset default_scaling_dataset(unsigned bits, std::uint64_t seed);

}  // namespace qgad
