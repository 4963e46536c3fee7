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


#include "qgad/synthetic.hpp"

#include <algorithm>
#include <random>

namespace qgad {

QuantizedDataset random_quantized_dataset(std::size_t rows, std::size_t cols,
                                          unsigned bits, StreamRng& rng) {
  std::uniform_int_distribution<std::uint32_t> mag(0, (1u << bits) - 1);
  std::bernoulli_distribution neg(0.5);
  std::vector<FixedPointValue> values;
  values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const std::uint32_t m = mag(rng);
    const bool n = neg(rng);
    values.push_back(make_fixed_point(n && m != 0, m, bits));
  }
  return QuantizedDataset(rows, cols, bits, std::move(values));
}

std::vector<std::vector<double>> gaussian_rows(std::size_t rows,
                                               const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& factor,
                                               StreamRng& rng, double limit) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = mean.size();
  std::vector<std::vector<double>> out(rows, std::vector<double>(d));
  Eigen::VectorXd z(d);
  for (std::size_t i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) z(k) = normal(rng);
    const Eigen::VectorXd x = mean + factor * z;
    for (Eigen::Index k = 0; k < d; ++k) {
      out[i][static_cast<std::size_t>(k)] = std::clamp(x(k), -limit, limit);
    }
  }
  return out;
}

}  // namespace qgad
