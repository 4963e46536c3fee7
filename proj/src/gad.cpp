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

#include "qgad/gad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

// Relative eigenvalue floor below which C is treated as singular.
constexpr double kSingularTolerance = 1e-12;

__extension__ typedef __int128 Wide;

}  // namespace

GaussianModel::GaussianModel(Eigen::VectorXd mu, Eigen::MatrixXd cov,
                             double ridge)
    : mu_(std::move(mu)), cov_(std::move(cov)) {
  const auto d = mu_.size();
  if (d < 1 || cov_.rows() != d || cov_.cols() != d) {
    throw DomainError("mean and covariance dimensions disagree");
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("covariance matrix is not symmetric");
  }
  if (ridge < 0.0) throw DomainError("ridge must be non-negative");
  if (ridge > 0.0) cov_ += ridge * Eigen::MatrixXd::Identity(d, d);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_);
  min_eig_ = eig.eigenvalues()(0);
  max_eig_ = eig.eigenvalues()(d - 1);
  const double scale = std::max(1.0, std::abs(max_eig_));
  if (min_eig_ <= kSingularTolerance * scale) {
    degenerate_ = true;
    std::ostringstream os;
    os << "covariance is singular: eigenvalue " << min_eig_
       << " along direction (";
    const Eigen::VectorXd v = eig.eigenvectors().col(0);
    for (Eigen::Index i = 0; i < d; ++i) os << (i ? ", " : "") << v(i);
    os << ")";
    degeneracy_ = os.str();
    return;
  }
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) {
    degenerate_ = true;
    degeneracy_ = "covariance Cholesky factorization failed";
    return;
  }
  const Eigen::MatrixXd l = llt_.matrixL();
  log_det_ = 2.0 * l.diagonal().array().log().sum();
}

void GaussianModel::require_regular() const {
  if (degenerate_) throw SingularCovarianceError(degeneracy_);
}

double GaussianModel::inverse_norm() const {
  require_regular();
  return 1.0 / min_eig_;
}

double GaussianModel::log_determinant() const {
  require_regular();
  return log_det_;
}

double GaussianModel::mahalanobis_squared(const Eigen::VectorXd& x) const {
  require_regular();
  if (x.size() != dims()) {
    std::ostringstream os;
    os << "point has " << x.size() << " features, model has " << dims();
    throw DomainError(os.str());
  }
  const Eigen::VectorXd z = llt_.matrixL().solve(x - mu_);
  return z.squaredNorm();
}

double GaussianModel::log_density(const Eigen::VectorXd& x) const {
  const double d = static_cast<double>(dims());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_determinant() +
                 mahalanobis_squared(x));
}

double GaussianModel::density(const Eigen::VectorXd& x) const {
  return std::exp(log_density(x));
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> classical_moments(
    const QuantizedDataset& ds) {
  if (ds.rows() < 2) throw DomainError("classical fit needs M >= 2");
  const auto d = static_cast<Eigen::Index>(ds.cols());
  const auto m = static_cast<Wide>(ds.rows());
  // Work with integers a_ij = 2^n x_ij so that every sum is exact.
  std::vector<Wide> sums(static_cast<std::size_t>(d), 0);
  std::vector<Wide> cross(static_cast<std::size_t>(d * d), 0);
  auto scaled = [&](std::size_t i, std::size_t j) -> Wide {
    const auto& v = ds.at(i, j);
    return v.negative ? -static_cast<Wide>(v.magnitude)
                      : static_cast<Wide>(v.magnitude);
  };
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const Wide aj = scaled(i, static_cast<std::size_t>(j));
      sums[static_cast<std::size_t>(j)] += aj;
      for (Eigen::Index k = j; k < d; ++k) {
        cross[static_cast<std::size_t>(j * d + k)] +=
            aj * scaled(i, static_cast<std::size_t>(k));
      }
    }
  }
  const double unit = std::ldexp(1.0, -static_cast<int>(ds.bits()));
  const double md = static_cast<double>(ds.rows());
  Eigen::VectorXd mu(d);
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    mu(j) = static_cast<double>(sums[static_cast<std::size_t>(j)]) * unit / md;
    for (Eigen::Index k = j; k < d; ++k) {
      // C_jk = (M sum a_j a_k - S_j S_k) / (M (M - 1) 4^n)
      const Wide num = m * cross[static_cast<std::size_t>(j * d + k)] -
                           sums[static_cast<std::size_t>(j)] *
                               sums[static_cast<std::size_t>(k)];
      c(j, k) = static_cast<double>(num) * unit * unit / (md * (md - 1.0));
      c(k, j) = c(j, k);
    }
  }
  return {mu, c};
}

GaussianModel classical_fit(const QuantizedDataset& ds) {
  auto [mu, c] = classical_moments(ds);
  return GaussianModel(std::move(mu), std::move(c));
}

Detection detect(const GaussianModel& model, const Eigen::VectorXd& x,
                 double sigma) {
  if (sigma < 0.0) throw DomainError("threshold must be non-negative");
  Detection out;
  out.density = model.density(x);
  out.anomaly = out.density < sigma;
  return out;
}

double quantile_threshold(std::vector<double> densities, double q) {
  if (densities.empty()) throw DomainError("no densities to take a quantile of");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile must lie in [0, 1]");
  std::sort(densities.begin(), densities.end());
  const double pos = q * static_cast<double>(densities.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, densities.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return densities[lo] + frac * (densities[hi] - densities[lo]);
}

bool ErrorBudget::proviso_holds(std::size_t dims) const {
  const double d = static_cast<double>(dims);
  return d * inv_norm * (d * epsilon_c) <= 0.5;
}

double density_error_bound(const ErrorBudget& b, std::size_t dims) {
  if (b.epsilon_mu < 0.0 || b.epsilon_c < 0.0 || b.inv_norm < 0.0) {
    throw BoundInvalidError("error budget entries must be non-negative");
  }
  if (b.epsilon_c > 3.0 * b.epsilon_mu * (1.0 + 1e-12)) {
    throw BoundInvalidError("covariance error exceeds 3 * epsilon_mu");
  }
  if (!b.proviso_holds(dims)) {
    throw BoundInvalidError(
        "perturbation too large: D * ||C^-1|| * ||dC|| exceeds 1/2");
  }
  const double d2 = static_cast<double>(dims * dims);
  return 7.0 * d2 * b.inv_norm * b.epsilon_mu +
         12.0 * d2 * b.inv_norm * b.inv_norm * b.epsilon_mu;
}

double allocate_epsilon_mu(double epsilon, std::size_t dims, double kappa) {
  if (!(epsilon > 0.0) || !(kappa > 0.0)) {
    throw DomainError("epsilon and kappa must be positive");
  }
  const double d = static_cast<double>(dims);
  return epsilon / (7.0 * d * kappa + 12.0 * kappa * kappa);
}

double allocate_epsilon_mu_from_inverse_norm(double epsilon, std::size_t dims,
                                             double inv_norm) {
  if (!(epsilon > 0.0) || !(inv_norm > 0.0)) {
    throw DomainError("epsilon and ||C^-1|| must be positive");
  }
  const double d2 = static_cast<double>(dims * dims);
  return epsilon / (7.0 * d2 * inv_norm + 12.0 * d2 * inv_norm * inv_norm);
}

double effective_kappa(const GaussianModel& model) {
  return static_cast<double>(model.dims()) * model.inverse_norm();
}

BoundCheck check_bound_empirically(const GaussianModel& true_model,
                                   const GaussianModel& perturbed_model,
                                   const Eigen::VectorXd& x,
                                   const ErrorBudget& budget) {
  const auto d = true_model.dims();
  if (perturbed_model.dims() != d) {
    throw DomainError("models differ in dimension");
  }
  const double tol = 1e-15;
  const double dmu =
      (perturbed_model.mean() - true_model.mean()).cwiseAbs().maxCoeff();
  const double dc = (perturbed_model.covariance() - true_model.covariance())
                        .cwiseAbs()
                        .maxCoeff();
  if (dmu > budget.epsilon_mu + tol || dc > budget.epsilon_c + tol) {
    throw BoundInvalidError("perturbation leaves the element-wise error box");
  }
  BoundCheck out;
  out.bound = density_error_bound(budget, static_cast<std::size_t>(d));
  out.delta_p = std::abs(true_model.density(x) - perturbed_model.density(x));
  out.margin = kFirstOrderSlack * out.bound - out.delta_p;
  out.holds = out.margin >= 0.0;
  return out;
}

}  // namespace qgad
