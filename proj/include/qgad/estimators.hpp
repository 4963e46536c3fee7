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
#include <string>
#include <vector>

#include "qgad/fixedpoint.hpp"
#include "qgad/signtest.hpp"
#include "qgad/statevector.hpp"

namespace qgad {

enum class Backend { kExact, kShots };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

inline constexpr double kDefaultEpsilonMuShots = 1e-3;
inline constexpr double kDefaultEpsilonMuExact = 1e-12;

struct EstimationBudget {
  Backend mode = Backend::kExact;
  /// Measurements per magnitude estimate (and per postselection probe).
  std::uint64_t shots_magnitude = 100000;
  double delta = 0.1;
  /// Magnitudes strictly below this are reported as zero, sign test skipped.
  double epsilon_mu = kDefaultEpsilonMuExact;
  std::uint64_t seed = 0;
  bool adaptive_sign = false;
  unsigned qubit_cap = kDefaultQubitCap;

  /// Throws DomainError on an invalid combination.
  void validate() const;
};

/// Sampling phases; together with the element index they select the RNG
/// stream, so results do not depend on evaluation order.
enum class Phase : std::uint64_t {
  kMagnitude = 0,
  kSecondStage = 1,
  kSignProbe = 2,
  kSignTest = 3,
};

struct MeanMagnitude {
  double magnitude = 0.0;
  double p_mu = 0.0;
  std::uint64_t shots_used = 0;
};

struct CovMagnitude {
  double magnitude = 0.0;
  double p21 = 0.0;
  double p22 = 0.0;
  std::uint64_t shots_first_stage = 0;
  std::uint64_t shots_second_stage = 0;
  /// Feature j is all zero: nothing survives the first postselection.
  bool degenerate = false;
};

struct SignEstimate {
  SignVerdict verdict;
  /// P_11 for means, P_23 for covariance elements (exact or probed).
  double p_postselect = 0.0;
  double alpha_floor = 0.0;
  double beta_floor = 0.0;
  std::uint64_t probe_shots = 0;
};

enum class ElementKind { kMean, kCovariance };

struct ElementEstimate {
  ElementKind kind = ElementKind::kMean;
  std::size_t j = 0;
  std::size_t k = 0;
  double magnitude = 0.0;
  Sign sign = Sign::kNonNegative;
  /// Signed estimate after the zeroing rule (mu_j or C'_jk).
  double value = 0.0;
  bool sign_test_skipped = false;
  bool degenerate = false;
  /// P_mu for means, P_22 for covariances.
  double p_magnitude = 0.0;
  /// P_21; covariances only.
  double p_first_stage = 0.0;
  /// P_11 for means, P_23 for covariances.
  double p_sign_postselect = 0.0;
  double p_hat_sign = 0.0;
  double alpha_floor = 0.0;
  double beta_floor = 0.0;
  std::uint64_t shots_magnitude = 0;
  std::uint64_t shots_sign = 0;

  friend bool operator==(const ElementEstimate&,
                         const ElementEstimate&) = default;
};

struct EstimateReport {
  EstimationBudget budget;
  Eigen::VectorXd mu_hat;
  Eigen::MatrixXd cov_prime_hat;
  Eigen::MatrixXd cov_hat;
  std::vector<ElementEstimate> means;
  /// Upper triangle, row-major: (0,0), (0,1), ..., (1,1), ...
  std::vector<ElementEstimate> covariances;
};

RegisterLayout layout_for(const QuantizedDataset& dataset);

/// U_M, U_AT with the magnitude oracle of feature j, signed load of
/// feature j, then U_M^dagger. Magnitude and sign steps of the mean share
/// this state and differ only in what is measured.
StateVector prepare_mean_state(const QuantizedDataset& dataset, std::size_t j,
                               unsigned qubit_cap = kDefaultQubitCap);

/// U_M and U_AT with the magnitude oracle of feature j (the state that the
/// first covariance postselection measures).
StateVector prepare_cov_first_stage(const QuantizedDataset& dataset,
                                    std::size_t j,
                                    unsigned qubit_cap = kDefaultQubitCap);

/// Continues from the state postselected on reference = 0, flag = 1:
/// X on the flag, U_AT with feature k, paired sign load, U_M^dagger.
void continue_cov_pipeline(StateVector& postselected,
                           const QuantizedDataset& dataset, std::size_t j,
                           std::size_t k);

/// Pattern for "every register zero except flag = 1".
Pattern flag_only_pattern(const RegisterLayout& layout);
/// Pattern for "index, sign, data and reference registers all zero".
Pattern leading_zero_pattern(const RegisterLayout& layout);

MeanMagnitude estimate_mean_magnitude(const QuantizedDataset& dataset,
                                      std::size_t j,
                                      const EstimationBudget& budget);

/// Throws PostselectionError when the leading registers cannot be zero.
SignEstimate estimate_mean_sign(const QuantizedDataset& dataset,
                                std::size_t j, const EstimationBudget& budget);

/// |C'_jk| = M sqrt(P21 P22) / (M - 1). Needs j <= k and M >= 2.
CovMagnitude estimate_cov_prime_magnitude(const QuantizedDataset& dataset,
                                          std::size_t j, std::size_t k,
                                          const EstimationBudget& budget);

/// `mu_j_hint` is |mu_j| (or its estimate) used in the beta floor.
SignEstimate estimate_cov_prime_sign(const QuantizedDataset& dataset,
                                     std::size_t j, std::size_t k,
                                     const EstimationBudget& budget,
                                     double mu_j_hint = 0.0);

/// C_jk = C'_jk - M mu_j mu_k / (M - 1), upper triangle mirrored.
Eigen::MatrixXd assemble_covariance(const Eigen::VectorXd& mu_hat,
                                    const Eigen::MatrixXd& cov_prime_hat,
                                    std::size_t rows);

/// Full estimation of every mean and every j <= k covariance element.
EstimateReport fit(const QuantizedDataset& dataset,
                   const EstimationBudget& budget);

}  // namespace qgad
