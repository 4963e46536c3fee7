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
#include <span>
#include <string>
#include <vector>

#include "qgad/fixedpoint.hpp"

namespace qgad {

/// Multivariate normal N(mu, C). Factorizations are computed once at
/// construction; the model is immutable afterwards.
class GaussianModel {
 public:
  /// `ridge` > 0 adds ridge * I to the covariance before factorizing.
  GaussianModel(Eigen::VectorXd mu, Eigen::MatrixXd cov, double ridge = 0.0);

  Eigen::Index dims() const { return mu_.size(); }
  const Eigen::VectorXd& mean() const { return mu_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }

  /// Not positive definite (within a relative eigenvalue tolerance).
  bool degenerate() const { return degenerate_; }
  /// Why the model is degenerate, naming the near-null eigendirection.
  const std::string& degeneracy() const { return degeneracy_; }

  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  /// Spectral norm of C^-1, i.e. 1 / min eigenvalue.
  double inverse_norm() const;

  // The following throw SingularCovarianceError on a degenerate model.
  double log_determinant() const;
  double mahalanobis_squared(const Eigen::VectorXd& x) const;
  double log_density(const Eigen::VectorXd& x) const;
  double density(const Eigen::VectorXd& x) const;

 private:
  void require_regular() const;

  Eigen::VectorXd mu_;
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
  bool degenerate_ = false;
  std::string degeneracy_;
};

/// Direct sample mean and (M - 1)-normalized covariance of the decoded
/// dataset. Sums are taken over the integer magnitudes, so each element
/// carries a single rounding.
GaussianModel classical_fit(const QuantizedDataset& dataset);

/// Mean and covariance only, without factorizing.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> classical_moments(
    const QuantizedDataset& dataset);

struct Detection {
  bool anomaly = false;
  double density = 0.0;
};

/// anomaly iff density(x) < sigma. Throws DomainError for sigma < 0.
Detection detect(const GaussianModel& model, const Eigen::VectorXd& x,
                 double sigma);

/// Linear-interpolated q-quantile (q in [0, 1]) of the given densities.
double quantile_threshold(std::vector<double> densities, double q);

struct ErrorBudget {
  double epsilon = 0.0;
  double epsilon_mu = 0.0;
  /// Per-element covariance error; at most 3 * epsilon_mu.
  double epsilon_c = 0.0;
  double inv_norm = 0.0;
  double kappa = 0.0;

  /// D * ||C^-1|| * (D * epsilon_c) <= 1/2.
  bool proviso_holds(std::size_t dims) const;
};

/// 7 D^2 ||C^-1|| eps_mu + 12 D^2 ||C^-1||^2 eps_mu. Throws
/// BoundInvalidError when epsilon_c > 3 eps_mu or the proviso fails.
double density_error_bound(const ErrorBudget& budget, std::size_t dims);

/// eps / (7 D kappa + 12 kappa^2).
double allocate_epsilon_mu(double epsilon, std::size_t dims, double kappa);

/// eps / (7 D^2 ||C^-1|| + 12 D^2 ||C^-1||^2).
double allocate_epsilon_mu_from_inverse_norm(double epsilon, std::size_t dims,
                                             double inv_norm);

/// Smallest kappa with every eigenvalue of C >= D / kappa.
double effective_kappa(const GaussianModel& model);

inline constexpr double kFirstOrderSlack = 1.5;

struct BoundCheck {
  bool holds = false;
  double delta_p = 0.0;
  double bound = 0.0;
  /// slack * bound - delta_p; negative when violated.
  double margin = 0.0;
};

/// |p_true(x) - p_perturbed(x)| against kFirstOrderSlack times the bound.
/// Throws BoundInvalidError when the perturbation leaves the
/// (epsilon_mu, epsilon_c) box or the proviso fails.
BoundCheck check_bound_empirically(const GaussianModel& true_model,
                                   const GaussianModel& perturbed_model,
                                   const Eigen::VectorXd& x,
                                   const ErrorBudget& budget);

}  // namespace qgad
