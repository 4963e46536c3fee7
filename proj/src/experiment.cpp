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


#include "qgad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qgad/errors.hpp"
#include "qgad/estimators.hpp"
#include "qgad/gad.hpp"
#include "qgad/synthetic.hpp"

namespace qgad {

void validate_scaling_request(std::span<const std::uint64_t> grid,
                              std::size_t repeats) {
  std::vector<std::uint64_t> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (g.size() < 3) {
    throw UsageError("shots grid needs at least 3 distinct points");
  }
  if (g.front() == 0) throw UsageError("shots grid entries must be positive");
  if (static_cast<double>(g.back()) < 100.0 * static_cast<double>(g.front())) {
    throw UsageError("shots grid must span at least two decades");
  }
  if (repeats < 20) throw UsageError("repeats must be at least 20");
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (n < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (dn * sxy - sx * sy) / den;
}

ScalingResult run_shot_scaling(const QuantizedDataset& dataset,
                               std::span<const std::uint64_t> grid,
                               std::size_t repeats, std::uint64_t seed,
                               unsigned qubit_cap) {
  validate_scaling_request(grid, repeats);
  const auto [mu, cov] = classical_moments(dataset);
  ScalingResult out;
  double slope_sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t j = 0; j < dataset.cols(); ++j) {
    const double truth = std::abs(mu(static_cast<Eigen::Index>(j)));
    std::vector<double> xs, ys;
    for (const std::uint64_t shots : grid) {
      double sq = 0.0;
      for (std::size_t r = 0; r < repeats; ++r) {
        EstimationBudget b;
        b.mode = Backend::kShots;
        b.shots_magnitude = shots;
        b.epsilon_mu = kDefaultEpsilonMuShots;
        b.seed = StreamRng(seed, r, 0x5CA1E)();
        b.qubit_cap = qubit_cap;
        const double est = estimate_mean_magnitude(dataset, j, b).magnitude;
        sq += (est - truth) * (est - truth);
      }
      const double rmse = std::sqrt(sq / static_cast<double>(repeats));
      out.points.push_back({shots, j, rmse});
      xs.push_back(static_cast<double>(shots));
      ys.push_back(rmse);
    }
    const double s = loglog_slope(xs, ys);
    out.slopes.push_back(s);
    if (std::isfinite(s)) {
      slope_sum += s;
      ++finite;
    }
  }
  out.slope = finite ? slope_sum / static_cast<double>(finite)
                     : std::numeric_limits<double>::quiet_NaN();
  return out;
}

void write_scaling_csv(std::ostream& out, const ScalingResult& result) {
  out << "shots,element,rmse,slope\n";
  for (const auto& p : result.points) {
    out << p.shots << ',' << p.element << ','
        << std::setprecision(17) << p.rmse << ',' << result.slopes[p.element]
        << '\n';
  }
}

QuantizedDataset default_scaling_dataset(unsigned bits, std::uint64_t seed) {
  Eigen::VectorXd mean(2);
  mean << 0.35, -0.25;
  Eigen::MatrixXd factor(2, 2);
  factor << 0.15, 0.0, 0.05, 0.12;
  StreamRng rng(seed, 0, 0xDA7A);
  const auto rows = gaussian_rows(32, mean, factor, rng);
  return quantize_dataset(rows, bits);
}

}  // namespace qgad
