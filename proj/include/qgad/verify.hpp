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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qgad {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Worst deviation or rate observed, suite specific.
  double worst = 0.0;
  std::string detail;
};

/// Functional comparator for n = 1..4 over every (a, b) pair, and the
/// gate-level ladder against functional mode for n = 1..3.
SuiteResult verify_comparator();

/// Flag-1 / reference-0 amplitude after U_AT equals the prior amplitude
/// times magnitude / 2^n, on random datasets with random prior amplitudes.
SuiteResult verify_transduction(std::uint64_t seed, std::size_t datasets = 20,
                                std::size_t max_rows = 32,
                                unsigned max_bits = 4);

/// Exact P_s on a grid of flag states, then the wrong-sign rate of
/// `trials` seeded runs per grid point at N_s = required_shots.
SuiteResult verify_signtest(std::uint64_t seed, double delta = 0.1,
                            std::size_t trials = 500);

/// Exact-backend fit against the classical moments on random datasets.
SuiteResult verify_equivalence(std::uint64_t seed, std::size_t datasets = 20,
                               std::size_t max_rows = 32,
                               std::size_t max_cols = 3,
                               unsigned max_bits = 4);

std::vector<std::string> verify_suite_names();

/// Runs one suite by name ("all" runs every suite). Throws UsageError for
/// an unknown name.
std::vector<SuiteResult> run_verify(const std::string& suite,
                                    std::uint64_t seed);

}  // namespace qgad
