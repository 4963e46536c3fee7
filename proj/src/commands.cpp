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


#include "qgad/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qgad/errors.hpp"
#include "qgad/experiment.hpp"
#include "qgad/io.hpp"
#include "qgad/verify.hpp"

namespace qgad {

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

void report_error(const std::exception& e, std::ostream& err) {
  err << "qgad: error: " << e.what() << '\n';
}

void report_degenerate(const std::string& detail, std::ostream& err) {
  nlohmann::ordered_json d;
  d["error"] = "degenerate_covariance";
  d["exit_code"] = kExitData;
  d["detail"] = detail;
  err << d.dump() << '\n';
}

Eigen::VectorXd row_vector(const std::vector<double>& row) {
  return Eigen::Map<const Eigen::VectorXd>(row.data(),
                                           static_cast<Eigen::Index>(row.size()));
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const IoError*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const Error*>(&e)) return kExitData;
  return kExitUsage;
}

EpsilonResolution resolve_epsilon_mu(const RunConfig& config,
                                     const QuantizedDataset& dataset) {
  if (config.epsilon_mu) return {*config.epsilon_mu, 0.0, "flag"};
  if (config.epsilon) {
    double kappa = 0.0;
    if (config.kappa) {
      kappa = *config.kappa;
    } else {
      const GaussianModel classical = classical_fit(dataset);
      if (classical.degenerate()) {
        throw SingularCovarianceError(
            "cannot estimate kappa from the data (" + classical.degeneracy() +
            "); pass --kappa or --epsilon-mu");
      }
      kappa = effective_kappa(classical);
    }
    return {allocate_epsilon_mu(*config.epsilon, dataset.cols(), kappa), kappa,
            "allocated"};
  }
  return {config.backend == Backend::kExact ? kDefaultEpsilonMuExact
                                            : kDefaultEpsilonMuShots,
          0.0, "default"};
}

FitArtifact run_fit(const RunConfig& config) {
  config.validate();
  Ingested in = ingest_file(config.input, config.bits, config.skip_header);
  const QuantizedDataset& ds = in.dataset;

  const EpsilonResolution eps = resolve_epsilon_mu(config, ds);
  EstimationBudget budget;
  budget.mode = config.backend;
  budget.shots_magnitude = config.shots;
  budget.delta = config.delta;
  budget.epsilon_mu = eps.epsilon_mu;
  budget.seed = config.seed;
  budget.adaptive_sign = config.adaptive_sign;
  budget.qubit_cap = config.qubit_cap;

  FitArtifact a;
  a.config_hash = config_hash(config);
  a.seed = config.seed;
  a.config = fit_config_json(config);
  a.epsilon_mu_source = eps.source;
  a.kappa = eps.kappa;
  a.ingestion = in.report;
  a.report = fit(ds, budget);
  auto [mu, cov] = classical_moments(ds);
  a.classical_mu = std::move(mu);
  a.classical_cov = std::move(cov);
  a.max_delta_mu = (a.report.mu_hat - a.classical_mu).cwiseAbs().maxCoeff();
  a.max_delta_cov = (a.report.cov_hat - a.classical_cov).cwiseAbs().maxCoeff();

  const GaussianModel model(a.report.mu_hat, a.report.cov_hat, config.ridge);
  if (model.degenerate()) {
    a.degenerate = true;
    a.degeneracy = model.degeneracy();
    return a;
  }
  a.training_densities.reserve(ds.rows());
  std::vector<double> row(ds.cols());
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (std::size_t j = 0; j < ds.cols(); ++j) row[j] = ds.value(i, j);
    a.training_densities.push_back(model.density(row_vector(row)));
  }
  return a;
}

GaussianModel model_from_artifact(const FitArtifact& artifact) {
  if (artifact.degenerate) throw SingularCovarianceError(artifact.degeneracy);
  const double ridge = artifact.config.contains("ridge")
                           ? artifact.config.at("ridge").get<double>()
                           : 0.0;
  GaussianModel model(artifact.report.mu_hat, artifact.report.cov_hat, ridge);
  if (model.degenerate()) throw SingularCovarianceError(model.degeneracy());
  return model;
}

double resolve_threshold(const FitArtifact& artifact, ThresholdPolicy policy,
                         double threshold, double quantile) {
  if (policy == ThresholdPolicy::kValue) {
    if (!(threshold >= 0.0)) throw UsageError("threshold must be non-negative");
    return threshold;
  }
  if (artifact.training_densities.empty()) {
    throw SingularCovarianceError(
        "artifact stores no training densities to take a quantile of");
  }
  return quantile_threshold(artifact.training_densities, quantile);
}

DetectResult run_detect(const FitArtifact& artifact,
                        const std::vector<std::vector<double>>& query,
                        ThresholdPolicy policy, double threshold,
                        double quantile) {
  const GaussianModel model = model_from_artifact(artifact);
  DetectResult out;
  out.threshold = resolve_threshold(artifact, policy, threshold, quantile);
  for (std::size_t i = 0; i < query.size(); ++i) {
    if (static_cast<Eigen::Index>(query[i].size()) != model.dims()) {
      std::ostringstream os;
      os << "query row " << i + 1 << " has " << query[i].size()
         << " features, model has " << model.dims();
      throw DomainError(os.str());
    }
    const Detection d = detect(model, row_vector(query[i]), out.threshold);
    out.rows.push_back({i + 1, d.density, d.anomaly});
    if (d.anomaly) ++out.anomalies;
  }
  return out;
}

nlohmann::ordered_json to_json(const DetectResult& result,
                               const DetectRequest& request) {
  nlohmann::ordered_json j;
  j["policy"] =
      request.policy == ThresholdPolicy::kValue ? "value" : "quantile";
  if (request.policy == ThresholdPolicy::kQuantile) {
    j["quantile"] = request.quantile;
  }
  j["threshold"] = result.threshold;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"row", r.row},
                    {"density", r.density},
                    {"anomaly", r.anomaly}});
  }
  j["rows"] = std::move(rows);
  j["summary"] = {{"rows", result.rows.size()},
                  {"anomalies", result.anomalies},
                  {"normal", result.rows.size() - result.anomalies}};
  return j;
}

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const FitArtifact a = run_fit(config);
    emit(serialize(a), config.output, out);
    if (a.degenerate) {
      report_degenerate(a.degeneracy, err);
      return kExitData;
    }
    return kExitOk;
  } catch (const SingularCovarianceError& e) {
    report_degenerate(e.what(), err);
    return kExitData;
  } catch (const std::exception& e) {
    report_error(e, err);
    return exit_code_for(e);
  }
}

int cmd_detect(const DetectRequest& request, std::ostream& out,
               std::ostream& err) {
  try {
    const FitArtifact a = read_artifact(request.model);
    const auto query = read_csv_file(request.query, request.skip_header);
    const DetectResult r = run_detect(a, query, request.policy,
                                      request.threshold, request.quantile);
    emit(to_json(r, request).dump(2) + "\n", request.output, out);
    return kExitOk;
  } catch (const SingularCovarianceError& e) {
    report_degenerate(e.what(), err);
    return kExitData;
  } catch (const std::exception& e) {
    report_error(e, err);
    return exit_code_for(e);
  }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  try {
    const auto results = run_verify(suite, seed);
    bool ok = true;
    for (const auto& r : results) {
      out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.cases
          << " cases, " << r.failures << " failures; " << r.detail << '\n';
      ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitVerification;
  } catch (const std::exception& e) {
    report_error(e, err);
    return exit_code_for(e);
  }
}

int cmd_experiment_scaling(const ScalingRequest& request, std::ostream& out,
                           std::ostream& err) {
  try {
    validate_scaling_request(request.grid, request.repeats);
    const QuantizedDataset ds =
        request.input.empty()
            ? default_scaling_dataset(request.bits, request.seed)
            : ingest_file(request.input, request.bits, request.skip_header)
                  .dataset;
    const ScalingResult r = run_shot_scaling(ds, request.grid, request.repeats,
                                             request.seed, request.qubit_cap);
    std::ostringstream csv;
    write_scaling_csv(csv, r);
    emit(csv.str(), request.output, out);
    std::ostream& note = request.output.empty() ? err : out;
    note << "fitted log-log slope: " << std::setprecision(6) << r.slope << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    report_error(e, err);
    return exit_code_for(e);
  }
}

}  // namespace qgad
