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

#include "qgad/signtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

constexpr std::uint64_t kPilotShots = 100;

std::uint64_t shots_for_product(double product, double delta) {
  const double p2 = product * product;
  const double bound = (1.0 - delta) * (1.0 - 4.0 * p2) / (4.0 * delta * p2);
  // Shave rounding noise so exact integers (e.g. 891) do not round up.
  const double shaved = bound * (1.0 - 1e-12);
  if (!(shaved < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(std::max(0.0, shaved))));
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    std::ostringstream os;
    os << "delta must lie in (0, 1), got " << delta;
    throw DomainError(os.str());
  }
}

SignVerdict verdict_from_counts(std::uint64_t hits, std::uint64_t shots) {
  SignVerdict v;
  v.shots_used = shots;
  v.p_hat = static_cast<double>(hits) / static_cast<double>(shots);
  v.sign = 2 * hits <= shots ? Sign::kNonNegative : Sign::kNegative;
  return v;
}

FlagQubitState hadamard_on_flag(const FlagPreparer& prepare) {
  FlagQubitState s = prepare();
  s.state.apply_hadamard(s.flag_qubit);
  return s;
}

}  // namespace

std::uint64_t required_shots(double alpha_floor, double beta_floor,
                             double delta) {
  check_delta(delta);
  if (!(alpha_floor > 0.0) || !(beta_floor > 0.0)) {
    throw UnboundedShotsError(
        "sign test needs positive amplitude floors; zero the quantity "
        "instead");
  }
  if (alpha_floor * alpha_floor + beta_floor * beta_floor > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "amplitude floors (" << alpha_floor << ", " << beta_floor
       << ") exceed a normalized qubit";
    throw DomainError(os.str());
  }
  return shots_for_product(alpha_floor * beta_floor, delta);
}

SignTestPlan plan_sign_test(double alpha_floor, double beta_floor,
                            double delta) {
  return SignTestPlan{delta, alpha_floor, beta_floor,
                      required_shots(alpha_floor, beta_floor, delta)};
}

double exact_p_s(double alpha, double beta) {
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "flag amplitudes (" << alpha << ", " << beta
       << ") are not normalized";
    throw DomainError(os.str());
  }
  return 0.5 - alpha * beta;
}

FlagQubitState single_qubit_flag(double alpha, double beta) {
  FlagQubitState s{StateVector(1), 0};
  s.state[0] = beta;
  s.state[1] = alpha;
  return s;
}

SignVerdict run_sign_test(const FlagPreparer& prepare, std::uint64_t shots,
                          StreamRng& rng) {
  if (shots < 1) throw DomainError("sign test needs at least one shot");
  const FlagQubitState s = hadamard_on_flag(prepare);
  const Register flag{s.flag_qubit, 1};
  const std::uint64_t hits = sample_matches(s.state, {{flag, 1}}, shots, rng);
  return verdict_from_counts(hits, shots);
}

SignVerdict run_sign_test(const FlagPreparer& prepare, std::uint64_t shots,
                          std::uint64_t seed) {
  StreamRng rng(seed);
  return run_sign_test(prepare, shots, rng);
}

SignVerdict exact_sign_test(const FlagPreparer& prepare) {
  const FlagQubitState s = hadamard_on_flag(prepare);
  const Register flag{s.flag_qubit, 1};
  SignVerdict v;
  v.p_hat = probability_of(s.state, {{flag, 1}}) / s.state.norm_squared();
  v.sign = v.p_hat <= 0.5 ? Sign::kNonNegative : Sign::kNegative;
  v.shots_used = 0;
  return v;
}

SignVerdict adaptive_sign_test(const FlagPreparer& prepare,
                               double alpha_floor, double beta_floor,
                               double delta, StreamRng& rng) {
  check_delta(delta);
  const SignVerdict pilot = run_sign_test(prepare, kPilotShots, rng);
  const double pilot_product = 0.5 * std::abs(0.5 - pilot.p_hat);
  const double floor_product = std::max(alpha_floor, 0.0) *
                               std::max(beta_floor, 0.0);
  const double product = std::min(0.5, std::max(floor_product, pilot_product));
  if (!(product > 0.0)) {
    throw UnboundedShotsError("adaptive sign test found no usable floor");
  }
  SignVerdict final_run =
      run_sign_test(prepare, shots_for_product(product, delta), rng);
  final_run.shots_used += pilot.shots_used;
  return final_run;
}

}  // namespace qgad
