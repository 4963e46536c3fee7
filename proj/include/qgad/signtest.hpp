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
#include <functional>

#include "qgad/rng.hpp"
#include "qgad/statevector.hpp"

namespace qgad {

enum class Sign { kNonNegative, kNegative };

inline double apply_sign(Sign s, double magnitude) {
  return s == Sign::kNegative ? -magnitude : magnitude;
}

struct SignTestPlan {
  double delta = 0.1;
  double alpha_floor = 0.0;
  double beta_floor = 0.0;
  std::uint64_t shots = 1;
};

struct SignVerdict {
  Sign sign = Sign::kNonNegative;
  /// Observed (or, in exact mode, exact) frequency of outcome |1> after H.
  double p_hat = 0.0;
  std::uint64_t shots_used = 0;
};

/// Smallest N_s guaranteeing the right sign of alpha*beta with probability
/// >= 1 - delta (one-sided Chebyshev on the binomial frequency):
///   ceil((1 - delta)(1 - 4 a^2 b^2) / (4 delta a^2 b^2)), at least 1.
/// Throws UnboundedShotsError for a zero floor and DomainError for
/// a^2 + b^2 > 1 or delta outside (0, 1).
std::uint64_t required_shots(double alpha_floor, double beta_floor,
                             double delta);

SignTestPlan plan_sign_test(double alpha_floor, double beta_floor,
                            double delta);

/// Probability of |1> after H on alpha|1> + beta|0>: 1/2 - alpha*beta.
/// Throws DomainError unless alpha^2 + beta^2 = 1 within 1e-9.
double exact_p_s(double alpha, double beta);

/// A (possibly multi-qubit) state whose flag qubit carries the amplitudes
/// under test; every other qubit is in a fixed basis state.
struct FlagQubitState {
  StateVector state;
  unsigned flag_qubit = 0;
};

using FlagPreparer = std::function<FlagQubitState()>;

/// alpha|1> + beta|0> on a single qubit.
FlagQubitState single_qubit_flag(double alpha, double beta);

/// Hadamard on the flag, `shots` measurements, verdict non-negative iff the
/// observed frequency of |1> is <= 1/2. Copies are i.i.d., so the prepared
/// state is sampled `shots` times instead of being rebuilt per copy.
SignVerdict run_sign_test(const FlagPreparer& prepare, std::uint64_t shots,
                          StreamRng& rng);
SignVerdict run_sign_test(const FlagPreparer& prepare, std::uint64_t shots,
                          std::uint64_t seed);

/// Reads P_s from the amplitudes; shots_used = 0.
SignVerdict exact_sign_test(const FlagPreparer& prepare);

/// Pilot of 100 shots, then N_s sized from max(alpha_floor * beta_floor,
/// half the pilot's |1/2 - p_hat|). The pilot shots count towards shots_used.
SignVerdict adaptive_sign_test(const FlagPreparer& prepare,
                               double alpha_floor, double beta_floor,
                               double delta, StreamRng& rng);

}  // namespace qgad
