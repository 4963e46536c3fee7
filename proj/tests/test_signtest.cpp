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


#include <gtest/gtest.h>

#include <cmath>

#include "qgad/errors.hpp"
#include "qgad/signtest.hpp"

namespace qgad {
namespace {

// Independent evaluation of the shot formula with exact arithmetic on the
// hand-picked inputs.
TEST(RequiredShots, Examples) {
  EXPECT_EQ(required_shots(0.6, 0.8, 0.1), 1u);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(required_shots(h, h, 0.1), 1u);
  EXPECT_EQ(required_shots(h, h, 0.9), 1u);
  // 0.9 * 0.99 / (4 * 0.1 * 0.01 * 0.25) = 891 exactly.
  EXPECT_EQ(required_shots(0.1, 0.5, 0.1), 891u);
}

TEST(RequiredShots, Errors) {
  EXPECT_THROW(required_shots(0.0, 0.5, 0.1), UnboundedShotsError);
  EXPECT_THROW(required_shots(0.5, 0.0, 0.1), UnboundedShotsError);
  EXPECT_THROW(required_shots(0.9, 0.9, 0.1), DomainError);
  EXPECT_THROW(required_shots(0.5, 0.5, 0.0), DomainError);
  EXPECT_THROW(required_shots(0.5, 0.5, 1.0), DomainError);
}

TEST(RequiredShots, SatisfiesBoundAndMonotone) {
  for (double a = 0.05; a < 0.7; a += 0.05) {
    for (double b = 0.05; b < 0.7; b += 0.05) {
      for (double d : {0.01, 0.05, 0.1, 0.3}) {
        const auto n = required_shots(a, b, d);
        const double p = a * a * b * b;
        EXPECT_GE(static_cast<double>(n) * (1.0 + 1e-12),
                  (1.0 - d) * (1.0 - 4.0 * p) / (4.0 * d * p));
        EXPECT_GE(n, 1u);
        EXPECT_LE(required_shots(a + 0.05, b, d), n);
        EXPECT_LE(required_shots(a, b + 0.05, d), n);
        EXPECT_LE(required_shots(a, b, d * 1.5), n);
      }
    }
  }
}

TEST(PlanSignTest, CarriesFloors) {
  const auto plan = plan_sign_test(0.1, 0.5, 0.1);
  EXPECT_EQ(plan.shots, 891u);
  EXPECT_EQ(plan.alpha_floor, 0.1);
  EXPECT_EQ(plan.beta_floor, 0.5);
}

TEST(ExactPs, Examples) {
  EXPECT_NEAR(exact_p_s(0.6, 0.8), 0.02, 1e-15);
  EXPECT_NEAR(exact_p_s(-0.6, 0.8), 0.98, 1e-15);
  EXPECT_EQ(exact_p_s(0.0, 1.0), 0.5);
  EXPECT_THROW(exact_p_s(0.6, 0.6), DomainError);
}

TEST(RunSignTest, ExactVerdicts) {
  auto pos = exact_sign_test([] { return single_qubit_flag(0.6, 0.8); });
  EXPECT_EQ(pos.sign, Sign::kNonNegative);
  EXPECT_NEAR(pos.p_hat, 0.02, 1e-12);
  EXPECT_EQ(pos.shots_used, 0u);
  auto neg = exact_sign_test([] { return single_qubit_flag(-0.6, 0.8); });
  EXPECT_EQ(neg.sign, Sign::kNegative);
  EXPECT_NEAR(neg.p_hat, 0.98, 1e-12);
}

TEST(RunSignTest, SampledVerdicts) {
  const auto pos = run_sign_test([] { return single_qubit_flag(0.6, 0.8); }, 100, 1);
  EXPECT_EQ(pos.sign, Sign::kNonNegative);
  EXPECT_EQ(pos.shots_used, 100u);
  const auto neg = run_sign_test([] { return single_qubit_flag(-0.6, 0.8); }, 100, 1);
  EXPECT_EQ(neg.sign, Sign::kNegative);
  const auto again = run_sign_test([] { return single_qubit_flag(-0.6, 0.8); }, 100, 1);
  EXPECT_EQ(neg.p_hat, again.p_hat);
}

TEST(RunSignTest, TieIsNonNegative) {
  // alpha * beta = 0: P_s = 1/2; with two shots a 1/1 split is a tie.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto v = run_sign_test([] { return single_qubit_flag(0.0, 1.0); }, 2, seed);
    if (v.p_hat == 0.5) {
      EXPECT_EQ(v.sign, Sign::kNonNegative);
      return;
    }
  }
  FAIL() << "no tie observed";
}

TEST(SignTestProperty, ExactIdentityOnGrid) {
  for (double t = -3.1; t <= 3.1; t += 0.1) {
    const double a = std::sin(t), b = std::cos(t);
    const auto v = exact_sign_test([&] { return single_qubit_flag(a, b); });
    EXPECT_NEAR(v.p_hat, 0.5 - a * b, 1e-12);
    if (std::abs(a * b) > 1e-9) {
      EXPECT_EQ(v.sign, a * b > 0 ? Sign::kNonNegative : Sign::kNegative);
    }
  }
}

TEST(SignTestProperty, FailureRateWithinGuarantee) {
  const double delta = 0.1;
  const int trials = 500;
  const double band = delta + 2.0 * std::sqrt(delta * (1 - delta) / trials);
  std::uint64_t point = 0;
  for (double a : {0.1, 0.25, 0.5, 0.7}) {
    for (double sb : {1.0, -1.0}) {
      const double b = sb * std::sqrt(1.0 - a * a);
      if (std::abs(a * b) < 0.05) continue;
      const auto shots = required_shots(std::abs(a), std::abs(b), delta);
      int wrong = 0;
      for (int k = 0; k < trials; ++k) {
        StreamRng rng(123, point, static_cast<std::uint64_t>(k));
        const auto v = run_sign_test([&] { return single_qubit_flag(a, b); }, shots, rng);
        if (v.sign != (a * b > 0 ? Sign::kNonNegative : Sign::kNegative)) ++wrong;
      }
      EXPECT_LE(static_cast<double>(wrong) / trials, band) << "a=" << a << " b=" << b;
      ++point;
    }
  }
}

TEST(AdaptiveSignTest, DecidesClearCases) {
  StreamRng rng(4);
  const auto v = adaptive_sign_test([] { return single_qubit_flag(-0.6, 0.8); },
                                    0.01, 0.01, 0.1, rng);
  EXPECT_EQ(v.sign, Sign::kNegative);
  EXPECT_GE(v.shots_used, 100u);
  // Pilot sharpens a floor-driven budget of ~2e7 shots substantially.
  EXPECT_LT(v.shots_used, required_shots(0.01, 0.01, 0.1));
}

}  // namespace
}  // namespace qgad
