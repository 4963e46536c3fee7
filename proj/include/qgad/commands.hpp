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

#include <cstdint>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "qgad/artifact.hpp"
#include "qgad/gad.hpp"

namespace qgad {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerification = 3;

/// 1 for usage and I/O errors, 2 for every other library error.
int exit_code_for(const std::exception& e);

/// Resolves epsilon_mu for a dataset: the explicit value, an allocation of
/// `epsilon` over D and kappa, or the backend default. Returns
/// {epsilon_mu, kappa used (0 if none), source tag}.
struct EpsilonResolution {
  double epsilon_mu = 0.0;
  double kappa = 0.0;
  std::string source;
};
EpsilonResolution resolve_epsilon_mu(const RunConfig& config,
                                     const QuantizedDataset& dataset);

/// Ingest, estimate, compare with the classical fit and compute training
/// densities. A degenerate estimated covariance is recorded in the artifact
/// rather than thrown.
FitArtifact run_fit(const RunConfig& config);

/// Model described by an artifact. Throws SingularCovarianceError when the
/// artifact is degenerate.
GaussianModel model_from_artifact(const FitArtifact& artifact);

struct DetectRequest {
  std::string model;
  std::string query;
  bool skip_header = false;
  ThresholdPolicy policy = ThresholdPolicy::kQuantile;
  double threshold = 0.0;
  double quantile = 0.01;
  std::string output;
};

struct RowVerdict {
  std::size_t row = 0;
  double density = 0.0;
  bool anomaly = false;
};

struct DetectResult {
  double threshold = 0.0;
  std::vector<RowVerdict> rows;
  std::size_t anomalies = 0;
};

double resolve_threshold(const FitArtifact& artifact, ThresholdPolicy policy,
                         double threshold, double quantile);

DetectResult run_detect(const FitArtifact& artifact,
                        const std::vector<std::vector<double>>& query,
                        ThresholdPolicy policy, double threshold,
                        double quantile);

nlohmann::ordered_json to_json(const DetectResult& result,
                               const DetectRequest& request);

struct ScalingRequest {
  std::string input;
  bool skip_header = false;
  unsigned bits = 6;
  std::vector<std::uint64_t> grid;
  std::size_t repeats = 50;
  std::uint64_t seed = 0;
  unsigned qubit_cap = kDefaultQubitCap;
  std::string output;
};

// Command front ends: write results to `out` (or the configured output
// file), diagnostics to `err`, and return the process exit code.
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_detect(const DetectRequest& request, std::ostream& out,
               std::ostream& err);
int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out,
               std::ostream& err);
int cmd_experiment_scaling(const ScalingRequest& request, std::ostream& out,
                           std::ostream& err);

}  // namespace qgad
