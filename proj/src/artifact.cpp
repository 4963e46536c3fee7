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


#include "qgad/artifact.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

using nlohmann::ordered_json;
using json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (bits < 1 || bits > 16) throw UsageError("--bits must lie in [1, 16]");
  if (epsilon && epsilon_mu) {
    throw UsageError("give at most one of --epsilon and --epsilon-mu");
  }
  if (epsilon && !(*epsilon > 0.0)) throw UsageError("--epsilon must be > 0");
  if (epsilon_mu && !(*epsilon_mu > 0.0 && *epsilon_mu < 1.0)) {
    throw UsageError("--epsilon-mu must lie in (0, 1)");
  }
  if (kappa && !(*kappa > 0.0)) throw UsageError("--kappa must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
  if (shots < 1) throw UsageError("--shots must be positive");
  if (!(quantile >= 0.0 && quantile <= 1.0)) {
    throw UsageError("--quantile must lie in [0, 1]");
  }
  if (threshold_policy == ThresholdPolicy::kValue && !(threshold >= 0.0)) {
    throw UsageError("--threshold must be non-negative");
  }
  if (!(ridge >= 0.0)) throw UsageError("--ridge must be non-negative");
  if (qubit_cap < 1 || qubit_cap > 40) {
    throw UsageError("--qubit-cap must lie in [1, 40]");
  }
}

ordered_json fit_config_json(const RunConfig& c) {
  ordered_json j;
  j["bits"] = c.bits;
  j["backend"] = to_string(c.backend);
  j["shots"] = c.shots;
  j["delta"] = c.delta;
  j["epsilon"] = c.epsilon ? ordered_json(*c.epsilon) : ordered_json(nullptr);
  j["epsilon_mu"] =
      c.epsilon_mu ? ordered_json(*c.epsilon_mu) : ordered_json(nullptr);
  j["kappa"] = c.kappa ? ordered_json(*c.kappa) : ordered_json(nullptr);
  j["seed"] = c.seed;
  j["qubit_cap"] = c.qubit_cap;
  j["adaptive_sign"] = c.adaptive_sign;
  j["ridge"] = c.ridge;
  j["skip_header"] = c.skip_header;
  return j;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = fit_config_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json mat_json(const Eigen::MatrixXd& m) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    a.push_back(std::move(row));
  }
  return a;
}

Eigen::VectorXd vec_from(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd mat_from(const json& a) {
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = rows ? static_cast<Eigen::Index>(a[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = a[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError("ragged matrix in artifact");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

bool same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    // Bit-level comparison so that -0.0 and 0.0 differ.
    if (std::signbit(a.data()[i]) != std::signbit(b.data()[i]) ||
        !(a.data()[i] == b.data()[i])) {
      return false;
    }
  }
  return true;
}

ordered_json element_json(const ElementEstimate& e) {
  ordered_json j;
  j["kind"] = e.kind == ElementKind::kMean ? "mean" : "covariance";
  j["j"] = e.j;
  j["k"] = e.k;
  j["magnitude"] = e.magnitude;
  j["sign"] = e.sign == Sign::kNegative ? "negative" : "non_negative";
  j["value"] = e.value;
  j["sign_test_skipped"] = e.sign_test_skipped;
  j["degenerate"] = e.degenerate;
  j["p_magnitude"] = e.p_magnitude;
  j["p_first_stage"] = e.p_first_stage;
  j["p_sign_postselect"] = e.p_sign_postselect;
  j["p_hat_sign"] = e.p_hat_sign;
  j["alpha_floor"] = e.alpha_floor;
  j["beta_floor"] = e.beta_floor;
  j["shots_magnitude"] = e.shots_magnitude;
  j["shots_sign"] = e.shots_sign;
  return j;
}

ElementEstimate element_from(const json& j) {
  ElementEstimate e;
  e.kind = j.at("kind").get<std::string>() == "mean" ? ElementKind::kMean
                                                     : ElementKind::kCovariance;
  e.j = j.at("j").get<std::size_t>();
  e.k = j.at("k").get<std::size_t>();
  e.magnitude = j.at("magnitude").get<double>();
  e.sign = j.at("sign").get<std::string>() == "negative" ? Sign::kNegative
                                                          : Sign::kNonNegative;
  e.value = j.at("value").get<double>();
  e.sign_test_skipped = j.at("sign_test_skipped").get<bool>();
  e.degenerate = j.at("degenerate").get<bool>();
  e.p_magnitude = j.at("p_magnitude").get<double>();
  e.p_first_stage = j.at("p_first_stage").get<double>();
  e.p_sign_postselect = j.at("p_sign_postselect").get<double>();
  e.p_hat_sign = j.at("p_hat_sign").get<double>();
  e.alpha_floor = j.at("alpha_floor").get<double>();
  e.beta_floor = j.at("beta_floor").get<double>();
  e.shots_magnitude = j.at("shots_magnitude").get<std::uint64_t>();
  e.shots_sign = j.at("shots_sign").get<std::uint64_t>();
  return e;
}

bool same_budget(const EstimationBudget& a, const EstimationBudget& b) {
  return a.mode == b.mode && a.shots_magnitude == b.shots_magnitude &&
         a.delta == b.delta && a.epsilon_mu == b.epsilon_mu &&
         a.seed == b.seed && a.adaptive_sign == b.adaptive_sign &&
         a.qubit_cap == b.qubit_cap;
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::signbit(a[i]) != std::signbit(b[i]) || !(a[i] == b[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool operator==(const FitArtifact& a, const FitArtifact& b) {
  const auto& ia = a.ingestion;
  const auto& ib = b.ingestion;
  return a.format == b.format && a.tool_version == b.tool_version &&
         a.config_hash == b.config_hash && a.seed == b.seed &&
         a.config == b.config && a.epsilon_mu_source == b.epsilon_mu_source &&
         a.kappa == b.kappa && ia.rows == ib.rows && ia.cols == ib.cols &&
         ia.bits == ib.bits && ia.index_bits == ib.index_bits &&
         ia.clamped_cells == ib.clamped_cells &&
         same_budget(a.report.budget, b.report.budget) &&
         same(a.report.mu_hat, b.report.mu_hat) &&
         same(a.report.cov_prime_hat, b.report.cov_prime_hat) &&
         same(a.report.cov_hat, b.report.cov_hat) &&
         a.report.means == b.report.means &&
         a.report.covariances == b.report.covariances &&
         same(a.classical_mu, b.classical_mu) &&
         same(a.classical_cov, b.classical_cov) &&
         a.max_delta_mu == b.max_delta_mu &&
         a.max_delta_cov == b.max_delta_cov && a.degenerate == b.degenerate &&
         a.degeneracy == b.degeneracy &&
         same_values(a.training_densities, b.training_densities);
}

ordered_json to_json(const FitArtifact& a) {
  ordered_json j;
  j["format"] = a.format;
  j["tool_version"] = a.tool_version;
  j["config_hash"] = a.config_hash;
  j["seed"] = a.seed;
  j["config"] = a.config;
  j["epsilon_mu_source"] = a.epsilon_mu_source;
  j["kappa"] = a.kappa;
  j["ingestion"] = {{"rows", a.ingestion.rows},
                    {"cols", a.ingestion.cols},
                    {"bits", a.ingestion.bits},
                    {"index_bits", a.ingestion.index_bits},
                    {"clamped_cells", a.ingestion.clamped_cells}};
  const auto& b = a.report.budget;
  j["budget"] = {{"backend", to_string(b.mode)},
                 {"shots_magnitude", b.shots_magnitude},
                 {"delta", b.delta},
                 {"epsilon_mu", b.epsilon_mu},
                 {"seed", b.seed},
                 {"adaptive_sign", b.adaptive_sign},
                 {"qubit_cap", b.qubit_cap}};
  j["mu_hat"] = vec_json(a.report.mu_hat);
  j["cov_prime_hat"] = mat_json(a.report.cov_prime_hat);
  j["cov_hat"] = mat_json(a.report.cov_hat);
  ordered_json means = ordered_json::array();
  for (const auto& e : a.report.means) means.push_back(element_json(e));
  j["means"] = std::move(means);
  ordered_json covs = ordered_json::array();
  for (const auto& e : a.report.covariances) covs.push_back(element_json(e));
  j["covariances"] = std::move(covs);
  j["classical"] = {{"mu", vec_json(a.classical_mu)},
                    {"cov", mat_json(a.classical_cov)}};
  j["max_delta_mu"] = a.max_delta_mu;
  j["max_delta_cov"] = a.max_delta_cov;
  j["degenerate"] = a.degenerate;
  j["degeneracy"] = a.degeneracy;
  j["training_densities"] = a.training_densities;
  return j;
}

FitArtifact artifact_from_json(const json& j) {
  try {
    FitArtifact a;
    a.format = j.at("format").get<std::string>();
    if (a.format != kArtifactFormat) {
      throw FormatError("unsupported artifact format '" + a.format + "'");
    }
    a.tool_version = j.at("tool_version").get<std::string>();
    a.config_hash = j.at("config_hash").get<std::string>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.config = j.at("config");
    a.epsilon_mu_source = j.at("epsilon_mu_source").get<std::string>();
    a.kappa = j.at("kappa").get<double>();
    const json& in = j.at("ingestion");
    a.ingestion.rows = in.at("rows").get<std::size_t>();
    a.ingestion.cols = in.at("cols").get<std::size_t>();
    a.ingestion.bits = in.at("bits").get<unsigned>();
    a.ingestion.index_bits = in.at("index_bits").get<unsigned>();
    a.ingestion.clamped_cells = in.at("clamped_cells").get<std::size_t>();
    const json& b = j.at("budget");
    auto& budget = a.report.budget;
    budget.mode = backend_from_string(b.at("backend").get<std::string>());
    budget.shots_magnitude = b.at("shots_magnitude").get<std::uint64_t>();
    budget.delta = b.at("delta").get<double>();
    budget.epsilon_mu = b.at("epsilon_mu").get<double>();
    budget.seed = b.at("seed").get<std::uint64_t>();
    budget.adaptive_sign = b.at("adaptive_sign").get<bool>();
    budget.qubit_cap = b.at("qubit_cap").get<unsigned>();
    a.report.mu_hat = vec_from(j.at("mu_hat"));
    a.report.cov_prime_hat = mat_from(j.at("cov_prime_hat"));
    a.report.cov_hat = mat_from(j.at("cov_hat"));
    for (const auto& e : j.at("means")) a.report.means.push_back(element_from(e));
    for (const auto& e : j.at("covariances")) {
      a.report.covariances.push_back(element_from(e));
    }
    a.classical_mu = vec_from(j.at("classical").at("mu"));
    a.classical_cov = mat_from(j.at("classical").at("cov"));
    a.max_delta_mu = j.at("max_delta_mu").get<double>();
    a.max_delta_cov = j.at("max_delta_cov").get<double>();
    a.degenerate = j.at("degenerate").get<bool>();
    a.degeneracy = j.at("degeneracy").get<std::string>();
    a.training_densities =
        j.at("training_densities").get<std::vector<double>>();
    return a;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed artifact: ") + e.what());
  }
}

std::string serialize(const FitArtifact& artifact) {
  return to_json(artifact).dump(2) + "\n";
}

FitArtifact deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("artifact is not valid JSON: ") + e.what());
  }
  return artifact_from_json(j);
}

void write_artifact(const std::string& path, const FitArtifact& artifact) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize(artifact);
  if (!out) throw IoError("write to '" + path + "' failed");
}

FitArtifact read_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace qgad
