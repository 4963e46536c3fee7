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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgad/estimators.hpp"
#include "qgad/io.hpp"

namespace qgad {

inline constexpr char kToolVersion[] = "0.1.0";
inline constexpr char kArtifactFormat[] = "qgad-fit/1";

enum class ThresholdPolicy { kValue, kQuantile };

struct RunConfig {
  std::string input;
  bool skip_header = false;
  unsigned bits = 8;
  Backend backend = Backend::kExact;
  std::uint64_t shots = 100000;
  double delta = 0.1;
  /// At most one of these two; neither means the backend default epsilon_mu.
  std::optional<double> epsilon;
  std::optional<double> epsilon_mu;
  /// Used with `epsilon`; estimated from the classical fit when absent.
  std::optional<double> kappa;
  ThresholdPolicy threshold_policy = ThresholdPolicy::kQuantile;
  double threshold = 0.0;
  double quantile = 0.01;
  std::uint64_t seed = 0;
  unsigned qubit_cap = kDefaultQubitCap;
  bool adaptive_sign = false;
  double ridge = 0.0;
  std::string output;

  /// Throws UsageError on conflicting or out-of-range settings.
  void validate() const;
};

/// Settings that influence a fit, in a fixed key order. Input and output
/// paths are excluded so that the hash identifies the computation.
nlohmann::ordered_json fit_config_json(const RunConfig& config);

/// 64-bit FNV-1a of the compact config JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

struct FitArtifact {
  std::string format = kArtifactFormat;
  std::string tool_version = kToolVersion;
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  /// "flag", "allocated" or "default".
  std::string epsilon_mu_source;
  double kappa = 0.0;
  IngestionReport ingestion;
  EstimateReport report;
  Eigen::VectorXd classical_mu;
  Eigen::MatrixXd classical_cov;
  double max_delta_mu = 0.0;
  double max_delta_cov = 0.0;
  bool degenerate = false;
  std::string degeneracy;
  /// Density of every training row under the estimated model; empty when
  /// the model is degenerate.
  std::vector<double> training_densities;
};

bool operator==(const FitArtifact& a, const FitArtifact& b);

nlohmann::ordered_json to_json(const FitArtifact& artifact);
/// Throws FormatError on missing keys or a foreign format tag.
FitArtifact artifact_from_json(const nlohmann::ordered_json& j);

std::string serialize(const FitArtifact& artifact);
FitArtifact deserialize(const std::string& text);

void write_artifact(const std::string& path, const FitArtifact& artifact);
FitArtifact read_artifact(const std::string& path);

}  // namespace qgad
