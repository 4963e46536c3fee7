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

#include "qgad/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <optional>
#include <tuple>
#include <utility>

#include "qgad/circuits.hpp"
#include "qgad/errors.hpp"

namespace qgad {

namespace {

std::uint64_t mean_element_id(std::size_t j) { return j; }

std::uint64_t cov_element_id(const QuantizedDataset& ds, std::size_t j,
                             std::size_t k) {
  return ds.cols() + j * ds.cols() + k;
}

StreamRng stream(const EstimationBudget& b, std::uint64_t element,
                 Phase phase) {
  return StreamRng(b.seed, element, static_cast<std::uint64_t>(phase));
}

double ratio(std::uint64_t hits, std::uint64_t shots) {
  return shots == 0 ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(shots);
}

// Floors must describe a normalized qubit; shrink both if noise pushed them
// past the unit circle.
std::pair<double, double> normalize_floors(double a, double b) {
  const double s = a * a + b * b;
  if (s > 1.0) {
    const double f = 1.0 / std::sqrt(s);
    a *= f;
    b *= f;
  }
  return {a, b};
}

void check_feature(const QuantizedDataset& ds, std::size_t j) {
  if (j >= ds.cols()) {
    std::ostringstream os;
    os << "feature " << j << " out of range for D = " << ds.cols();
    throw DomainError(os.str());
  }
}

void check_pair(const QuantizedDataset& ds, std::size_t j, std::size_t k) {
  check_feature(ds, j);
  check_feature(ds, k);
  if (j > k) throw DomainError("covariance elements need j <= k");
  if (ds.rows() < 2) throw DomainError("covariance needs M >= 2");
}

SignVerdict decide(const FlagPreparer& prepare, double alpha_floor,
                   double beta_floor, const EstimationBudget& budget,
                   StreamRng& rng) {
  if (budget.mode == Backend::kExact) return exact_sign_test(prepare);
  if (budget.adaptive_sign) {
    return adaptive_sign_test(prepare, alpha_floor, beta_floor, budget.delta,
                              rng);
  }
  return run_sign_test(
      prepare, required_shots(alpha_floor, beta_floor, budget.delta), rng);
}

MeanMagnitude mean_magnitude_from(const StateVector& state,
                                  const RegisterLayout& layout,
                                  std::size_t j,
                                  const EstimationBudget& budget) {
  MeanMagnitude out;
  const Pattern pattern = flag_only_pattern(layout);
  if (budget.mode == Backend::kExact) {
    out.p_mu = probability_of(state, pattern);
  } else {
    StreamRng rng = stream(budget, mean_element_id(j), Phase::kMagnitude);
    const std::uint64_t hits =
        sample_matches(state, pattern, budget.shots_magnitude, rng);
    out.p_mu = ratio(hits, budget.shots_magnitude);
    out.shots_used = budget.shots_magnitude;
  }
  out.magnitude = std::sqrt(std::max(0.0, out.p_mu));
  return out;
}

SignEstimate mean_sign_from(const StateVector& state,
                            const RegisterLayout& layout,
                            const QuantizedDataset& ds, std::size_t j,
                            const EstimationBudget& budget) {
  SignEstimate out;
  const Pattern leading = leading_zero_pattern(layout);
  const MeasurementOutcome post = postselect(state, leading);

  double p_for_floor = post.probability;
  if (budget.mode == Backend::kExact) {
    out.p_postselect = post.probability;
  } else {
    StreamRng probe = stream(budget, mean_element_id(j), Phase::kSignProbe);
    const std::uint64_t hits =
        sample_matches(state, leading, budget.shots_magnitude, probe);
    out.p_postselect = ratio(hits, budget.shots_magnitude);
    out.probe_shots = budget.shots_magnitude;
    p_for_floor = hits > 0 ? out.p_postselect : 1.0;
  }

  const double root = std::sqrt(p_for_floor);
  std::tie(out.alpha_floor, out.beta_floor) = normalize_floors(
      budget.epsilon_mu / root, std::ldexp(1.0, -static_cast<int>(ds.bits())) / root);

  const unsigned flag = layout.flag.qubit();
  const FlagPreparer prepare = [&post, flag] {
    return FlagQubitState{*post.collapsed, flag};
  };
  StreamRng rng = stream(budget, mean_element_id(j), Phase::kSignTest);
  out.verdict = decide(prepare, out.alpha_floor, out.beta_floor, budget, rng);
  return out;
}

// First stage of the covariance pipeline plus (when something survives) the
// continued state ready for the final measurements.
struct CovStages {
  CovMagnitude magnitude;
  std::optional<StateVector> final_state;
};

CovStages run_cov_stages(const QuantizedDataset& ds, std::size_t j,
                         std::size_t k, const EstimationBudget& budget) {
  CovStages out;
  const RegisterLayout layout = layout_for(ds);
  const StateVector first = prepare_cov_first_stage(ds, j, budget.qubit_cap);
  const Pattern survive = {{layout.reference, 0}, {layout.flag, 1}};
  const double p21_exact = probability_of(first, survive);
  const double m = static_cast<double>(ds.rows());

  std::uint64_t survivors = 0;
  if (budget.mode == Backend::kExact) {
    out.magnitude.p21 = p21_exact;
  } else {
    StreamRng rng = stream(budget, cov_element_id(ds, j, k), Phase::kMagnitude);
    survivors = sample_matches(first, survive, budget.shots_magnitude, rng);
    out.magnitude.p21 = ratio(survivors, budget.shots_magnitude);
    out.magnitude.shots_first_stage = budget.shots_magnitude;
  }
  if (p21_exact < kPostselectFloor) {
    out.magnitude.degenerate = true;
    return out;
  }
  if (budget.mode == Backend::kShots && survivors == 0) return out;

  StateVector state = *postselect(first, survive).collapsed;
  continue_cov_pipeline(state, ds, j, k);

  const Pattern target = flag_only_pattern(layout);
  if (budget.mode == Backend::kExact) {
    out.magnitude.p22 = probability_of(state, target);
  } else {
    StreamRng rng =
        stream(budget, cov_element_id(ds, j, k), Phase::kSecondStage);
    const std::uint64_t hits = sample_matches(state, target, survivors, rng);
    out.magnitude.p22 = ratio(hits, survivors);
    out.magnitude.shots_second_stage = survivors;
  }
  out.magnitude.magnitude =
      m * std::sqrt(std::max(0.0, out.magnitude.p21 * out.magnitude.p22)) /
      (m - 1.0);
  out.final_state = std::move(state);
  return out;
}

SignEstimate cov_sign_from(const StateVector& final_state,
                           const QuantizedDataset& ds, std::size_t j,
                           std::size_t k, double p21,
                           const EstimationBudget& budget, double mu_j_hint) {
  SignEstimate out;
  const RegisterLayout layout = layout_for(ds);
  const Pattern leading = leading_zero_pattern(layout);
  const MeasurementOutcome post = postselect(final_state, leading);

  double p23_for_floor = post.probability;
  if (budget.mode == Backend::kExact) {
    out.p_postselect = post.probability;
  } else {
    StreamRng probe =
        stream(budget, cov_element_id(ds, j, k), Phase::kSignProbe);
    const std::uint64_t hits =
        sample_matches(final_state, leading, budget.shots_magnitude, probe);
    out.p_postselect = ratio(hits, budget.shots_magnitude);
    out.probe_shots = budget.shots_magnitude;
    p23_for_floor = hits > 0 ? out.p_postselect : 1.0;
  }

  const double m = static_cast<double>(ds.rows());
  const double p21_for_floor = p21 > 0.0 ? p21 : 1.0;
  const double root = std::sqrt(p21_for_floor * p23_for_floor);
  // alpha = C'_jk (M-1) / (M root);  beta >= (sum_i |x_ij| / M) / (2^n root)
  // and sum_i |x_ij| / M >= max(|mu_j|, P_21) because |x_ij| < 1.
  const double abs_mean_bound = std::max(std::abs(mu_j_hint), p21);
  std::tie(out.alpha_floor, out.beta_floor) = normalize_floors(
      budget.epsilon_mu * (m - 1.0) / (m * root),
      abs_mean_bound * std::ldexp(1.0, -static_cast<int>(ds.bits())) / root);

  const unsigned flag = layout.flag.qubit();
  const FlagPreparer prepare = [&post, flag] {
    return FlagQubitState{*post.collapsed, flag};
  };
  StreamRng rng = stream(budget, cov_element_id(ds, j, k), Phase::kSignTest);
  out.verdict = decide(prepare, out.alpha_floor, out.beta_floor, budget, rng);
  return out;
}

}  // namespace

std::string to_string(Backend b) {
  return b == Backend::kExact ? "exact" : "shots";
}

Backend backend_from_string(const std::string& s) {
  if (s == "exact") return Backend::kExact;
  if (s == "shots") return Backend::kShots;
  throw DomainError("unknown backend '" + s + "' (expected exact or shots)");
}

void EstimationBudget::validate() const {
  if (mode == Backend::kShots && shots_magnitude < 1) {
    throw DomainError("shot mode needs at least one shot per element");
  }
  if (!(epsilon_mu > 0.0 && epsilon_mu < 1.0)) {
    throw DomainError("epsilon_mu must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie in (0, 1)");
  }
}

RegisterLayout layout_for(const QuantizedDataset& dataset) {
  return RegisterLayout::make(dataset.index_bits(), dataset.bits());
}

Pattern flag_only_pattern(const RegisterLayout& l) {
  return {{l.index, 0}, {l.sign, 0}, {l.data, 0}, {l.reference, 0},
          {l.flag, 1}};
}

Pattern leading_zero_pattern(const RegisterLayout& l) {
  return {{l.index, 0}, {l.sign, 0}, {l.data, 0}, {l.reference, 0}};
}

StateVector prepare_mean_state(const QuantizedDataset& dataset, std::size_t j,
                               unsigned qubit_cap) {
  check_feature(dataset, j);
  const RegisterLayout layout = layout_for(dataset);
  StateVector state = StateVector::zero(layout, qubit_cap);
  state.apply_uniform_index(layout.index, dataset.rows());
  amplitude_transduction(state, layout,
                         DataOracle(dataset, j, OracleKind::kMagnitude));
  signed_load(state, layout, DataOracle(dataset, j, OracleKind::kSign));
  state.apply_uniform_index_adjoint(layout.index, dataset.rows());
  return state;
}

StateVector prepare_cov_first_stage(const QuantizedDataset& dataset,
                                    std::size_t j, unsigned qubit_cap) {
  check_feature(dataset, j);
  const RegisterLayout layout = layout_for(dataset);
  StateVector state = StateVector::zero(layout, qubit_cap);
  state.apply_uniform_index(layout.index, dataset.rows());
  amplitude_transduction(state, layout,
                         DataOracle(dataset, j, OracleKind::kMagnitude));
  return state;
}

void continue_cov_pipeline(StateVector& state, const QuantizedDataset& dataset,
                           std::size_t j, std::size_t k) {
  const RegisterLayout layout = layout_for(dataset);
  state.apply_x(layout.flag.qubit());
  amplitude_transduction(state, layout,
                         DataOracle(dataset, k, OracleKind::kMagnitude));
  signed_load_pair(state, layout, DataOracle(dataset, j, OracleKind::kSign),
                   DataOracle(dataset, k, OracleKind::kSign));
  state.apply_uniform_index_adjoint(layout.index, dataset.rows());
}

MeanMagnitude estimate_mean_magnitude(const QuantizedDataset& dataset,
                                      std::size_t j,
                                      const EstimationBudget& budget) {
  budget.validate();
  const StateVector state = prepare_mean_state(dataset, j, budget.qubit_cap);
  return mean_magnitude_from(state, layout_for(dataset), j, budget);
}

SignEstimate estimate_mean_sign(const QuantizedDataset& dataset,
                                std::size_t j,
                                const EstimationBudget& budget) {
  budget.validate();
  const StateVector state = prepare_mean_state(dataset, j, budget.qubit_cap);
  return mean_sign_from(state, layout_for(dataset), dataset, j, budget);
}

CovMagnitude estimate_cov_prime_magnitude(const QuantizedDataset& dataset,
                                          std::size_t j, std::size_t k,
                                          const EstimationBudget& budget) {
  budget.validate();
  check_pair(dataset, j, k);
  return run_cov_stages(dataset, j, k, budget).magnitude;
}

SignEstimate estimate_cov_prime_sign(const QuantizedDataset& dataset,
                                     std::size_t j, std::size_t k,
                                     const EstimationBudget& budget,
                                     double mu_j_hint) {
  budget.validate();
  check_pair(dataset, j, k);
  CovStages stages = run_cov_stages(dataset, j, k, budget);
  if (!stages.final_state) {
    throw PostselectionError(
        "covariance sign test impossible: no amplitude survives the first "
        "postselection");
  }
  return cov_sign_from(*stages.final_state, dataset, j, k, stages.magnitude.p21,
                       budget, mu_j_hint);
}

Eigen::MatrixXd assemble_covariance(const Eigen::VectorXd& mu_hat,
                                    const Eigen::MatrixXd& cov_prime_hat,
                                    std::size_t rows) {
  const auto d = mu_hat.size();
  if (cov_prime_hat.rows() != d || cov_prime_hat.cols() != d) {
    throw DomainError("mean and covariance dimensions disagree");
  }
  if (rows < 2) throw DomainError("covariance needs M >= 2");
  const double m = static_cast<double>(rows);
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j; k < d; ++k) {
      c(j, k) = cov_prime_hat(j, k) - m * mu_hat(j) * mu_hat(k) / (m - 1.0);
      c(k, j) = c(j, k);
    }
  }
  return c;
}

EstimateReport fit(const QuantizedDataset& dataset,
                   const EstimationBudget& budget) {
  budget.validate();
  if (dataset.rows() < 2) throw DomainError("fit needs M >= 2");
  const std::size_t d = dataset.cols();
  const RegisterLayout layout = layout_for(dataset);

  EstimateReport report;
  report.budget = budget;
  report.mu_hat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  report.cov_prime_hat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                               static_cast<Eigen::Index>(d));

  for (std::size_t j = 0; j < d; ++j) {
    const StateVector state = prepare_mean_state(dataset, j, budget.qubit_cap);
    const MeanMagnitude mag = mean_magnitude_from(state, layout, j, budget);
    ElementEstimate e;
    e.kind = ElementKind::kMean;
    e.j = e.k = j;
    e.p_magnitude = mag.p_mu;
    e.shots_magnitude = mag.shots_used;
    if (mag.magnitude < budget.epsilon_mu) {
      e.sign_test_skipped = true;
    } else {
      e.magnitude = mag.magnitude;
      const SignEstimate s = mean_sign_from(state, layout, dataset, j, budget);
      e.sign = s.verdict.sign;
      e.p_sign_postselect = s.p_postselect;
      e.p_hat_sign = s.verdict.p_hat;
      e.alpha_floor = s.alpha_floor;
      e.beta_floor = s.beta_floor;
      e.shots_sign = s.verdict.shots_used + s.probe_shots;
    }
    e.value = apply_sign(e.sign, e.magnitude);
    report.mu_hat(static_cast<Eigen::Index>(j)) = e.value;
    report.means.push_back(e);
  }

  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      CovStages stages = run_cov_stages(dataset, j, k, budget);
      ElementEstimate e;
      e.kind = ElementKind::kCovariance;
      e.j = j;
      e.k = k;
      e.degenerate = stages.magnitude.degenerate;
      e.p_first_stage = stages.magnitude.p21;
      e.p_magnitude = stages.magnitude.p22;
      e.shots_magnitude = stages.magnitude.shots_first_stage +
                          stages.magnitude.shots_second_stage;
      if (stages.magnitude.magnitude < budget.epsilon_mu ||
          !stages.final_state) {
        e.sign_test_skipped = true;
      } else {
        e.magnitude = stages.magnitude.magnitude;
        const SignEstimate s =
            cov_sign_from(*stages.final_state, dataset, j, k,
                          stages.magnitude.p21, budget,
                          report.mu_hat(static_cast<Eigen::Index>(j)));
        e.sign = s.verdict.sign;
        e.p_sign_postselect = s.p_postselect;
        e.p_hat_sign = s.verdict.p_hat;
        e.alpha_floor = s.alpha_floor;
        e.beta_floor = s.beta_floor;
        e.shots_sign = s.verdict.shots_used + s.probe_shots;
      }
      e.value = apply_sign(e.sign, e.magnitude);
      const auto jj = static_cast<Eigen::Index>(j);
      const auto kk = static_cast<Eigen::Index>(k);
      report.cov_prime_hat(jj, kk) = e.value;
      report.cov_prime_hat(kk, jj) = e.value;
      report.covariances.push_back(e);
    }
  }

  report.cov_hat =
      assemble_covariance(report.mu_hat, report.cov_prime_hat, dataset.rows());
  return report;
}

}  // namespace qgad
