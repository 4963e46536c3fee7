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


// qgad: fit, detect, verify and scaling experiments from the command line.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qgad/commands.hpp"
#include "qgad/errors.hpp"

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("QGAD_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(env, &pos, 0);
    if (pos != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw qgad::UsageError(std::string("QGAD_SEED is not an unsigned integer: ") +
                           env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Gaussian anomaly detection simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qgad::kToolVersion);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "qgad: error: " << e.what() << '\n';
    return qgad::kExitUsage;
  }

  // fit
  qgad::RunConfig config;
  config.seed = seed;
  std::string backend = "exact";
  double epsilon = 0.0, epsilon_mu = 0.0, kappa = 0.0;
  auto* fit = app.add_subcommand("fit", "Estimate mean and covariance");
  fit->add_option("--input", config.input, "Training data (CSV)")->required();
  fit->add_option("--bits", config.bits, "Fixed-point precision n")
      ->capture_default_str();
  fit->add_option("--backend", backend, "exact or shots")
      ->check(CLI::IsMember({"exact", "shots"}))
      ->capture_default_str();
  fit->add_option("--shots", config.shots, "Shots per magnitude estimate")
      ->capture_default_str();
  fit->add_option("--delta", config.delta, "Sign-test failure probability")
      ->capture_default_str();
  auto* eps_opt =
      fit->add_option("--epsilon", epsilon, "Target density error");
  auto* eps_mu_opt =
      fit->add_option("--epsilon-mu", epsilon_mu, "Per-element error");
  eps_opt->excludes(eps_mu_opt);
  auto* kappa_opt = fit->add_option("--kappa", kappa,
                                    "Effective condition number for --epsilon");
  kappa_opt->needs(eps_opt);
  fit->add_option("--seed", config.seed, "RNG seed (default $QGAD_SEED or 0)");
  fit->add_option("--qubit-cap", config.qubit_cap, "Largest simulated register")
      ->capture_default_str();
  fit->add_flag("--adaptive-sign", config.adaptive_sign,
                "Size sign tests from a pilot run");
  fit->add_option("--ridge", config.ridge, "Add ridge * I to the covariance");
  fit->add_flag("--skip-header", config.skip_header, "Skip one header line");
  fit->add_option("--output", config.output, "Artifact path (default stdout)");

  // detect
  qgad::DetectRequest detect;
  auto* det = app.add_subcommand("detect", "Score query rows against a fit");
  det->add_option("--model", detect.model, "Fit artifact")->required();
  det->add_option("--input", detect.query, "Query rows (CSV)")->required();
  auto* thr = det->add_option("--threshold", detect.threshold,
                              "Absolute density threshold");
  auto* qtl = det->add_option("--quantile", detect.quantile,
                              "Quantile of training densities")
                  ->capture_default_str();
  thr->excludes(qtl);
  det->add_flag("--skip-header", detect.skip_header, "Skip one header line");
  det->add_option("--output", detect.output, "Verdict path (default stdout)");

  // verify
  std::string suite = "all";
  std::uint64_t verify_seed = seed;
  auto* ver = app.add_subcommand("verify", "Run self-verification suites");
  ver->add_option("--suite", suite,
                  "comparator, transduction, signtest, equivalence or all")
      ->check(CLI::IsMember(
          {"comparator", "transduction", "signtest", "equivalence", "all"}))
      ->capture_default_str();
  ver->add_option("--seed", verify_seed, "RNG seed");

  // experiment scaling
  qgad::ScalingRequest scaling;
  scaling.seed = seed;
  scaling.grid = {100, 1000, 10000, 100000};
  auto* exp = app.add_subcommand("experiment", "Run an experiment");
  exp->require_subcommand(1);
  auto* scal = exp->add_subcommand("scaling", "Shot-noise scaling of |mu_j|");
  scal->add_option("--input", scaling.input, "Data (CSV); synthetic if absent");
  scal->add_option("--bits", scaling.bits, "Fixed-point precision n")
      ->capture_default_str();
  scal->add_option("--shots-grid", scaling.grid, "Shot counts")
      ->delimiter(',')
      ->capture_default_str();
  scal->add_option("--repeats", scaling.repeats, "Seeds per grid point")
      ->capture_default_str();
  scal->add_option("--seed", scaling.seed, "RNG seed");
  scal->add_option("--qubit-cap", scaling.qubit_cap, "Largest simulated register");
  scal->add_flag("--skip-header", scaling.skip_header, "Skip one header line");
  scal->add_option("--output", scaling.output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qgad::kExitUsage;
  }

  if (fit->parsed()) {
    config.backend = qgad::backend_from_string(backend);
    if (eps_opt->count() > 0) config.epsilon = epsilon;
    if (eps_mu_opt->count() > 0) config.epsilon_mu = epsilon_mu;
    if (kappa_opt->count() > 0) config.kappa = kappa;
    return qgad::cmd_fit(config, std::cout, std::cerr);
  }
  if (det->parsed()) {
    detect.policy = thr->count() > 0 ? qgad::ThresholdPolicy::kValue
                                     : qgad::ThresholdPolicy::kQuantile;
    return qgad::cmd_detect(detect, std::cout, std::cerr);
  }
  if (ver->parsed()) return qgad::cmd_verify(suite, verify_seed, std::cout, std::cerr);
  if (scal->parsed()) {
    return qgad::cmd_experiment_scaling(scaling, std::cout, std::cerr);
  }
  return qgad::kExitUsage;
}
