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

#include <algorithm>
#include <cmath>
#include <random>

#include "qgad/circuits.hpp"
#include "qgad/errors.hpp"
#include "qgad/statevector.hpp"

namespace qgad {
namespace {

constexpr double kTol = 1e-12;

StateVector random_state(unsigned qubits, std::uint64_t seed) {
  StateVector s(qubits);
  StreamRng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  double norm = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = Amplitude(g(rng), g(rng));
    norm += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= std::sqrt(norm);
  return s;
}

double max_diff(const StateVector& a, const StateVector& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

TEST(Layout, WidthsAndOffsets) {
  const auto l = RegisterLayout::make(3, 4);
  EXPECT_EQ(l.total_qubits(), 3u + 2 * 4 + 2);
  EXPECT_EQ(l.index.offset, 0u);
  EXPECT_EQ(l.sign.offset, 3u);
  EXPECT_EQ(l.data.offset, 4u);
  EXPECT_EQ(l.reference.offset, 8u);
  EXPECT_EQ(l.flag.offset, 12u);
  // Disjoint and covering.
  const BasisLabel all = l.index.mask() | l.sign.mask() | l.data.mask() |
                         l.reference.mask() | l.flag.mask();
  EXPECT_EQ(all, (BasisLabel{1} << l.total_qubits()) - 1);
  EXPECT_EQ(l.index.mask() & l.data.mask(), 0u);
}

TEST(InitZero, Sizes) {
  const auto a = StateVector::zero(RegisterLayout::make(1, 1));
  EXPECT_EQ(a.size(), 32u);  // q = 1 + 2 + 2
  EXPECT_EQ(a[0], Amplitude(1.0));
  const auto b = StateVector::zero(RegisterLayout::make(2, 2));
  EXPECT_EQ(b.size(), 256u);
  EXPECT_NEAR(b.norm_squared(), 1.0, kTol);
}

TEST(InitZero, QubitCap) {
  EXPECT_THROW(StateVector(30), ResourceError);
  EXPECT_THROW(StateVector(12, 10), ResourceError);
  EXPECT_NO_THROW(StateVector(10, 10));
}

TEST(UniformIndex, PowerOfTwo) {
  StateVector s(2);
  s.apply_uniform_index(Register{0, 2}, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i].real(), 0.5, kTol);
}

TEST(UniformIndex, ThreeOfFour) {
  StateVector s(3);
  s.apply_uniform_index(Register{0, 2}, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s[i].real(), 1.0 / std::sqrt(3.0), kTol);
  EXPECT_NEAR(std::abs(s[3]), 0.0, kTol);
  for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(s[i], Amplitude(0.0));
}

TEST(UniformIndex, SingleAndInvalid) {
  StateVector s(2);
  s.apply_uniform_index(Register{0, 2}, 1);
  EXPECT_NEAR(s[0].real(), 1.0, kTol);
  EXPECT_THROW(s.apply_uniform_index(Register{0, 2}, 5), LayoutError);
}

TEST(UniformIndex, AdjointUndoes) {
  for (std::size_t count : {3u, 5u, 7u, 8u}) {
    StateVector s = random_state(4, count);
    const StateVector before = s;
    s.apply_uniform_index(Register{0, 3}, count);
    s.apply_uniform_index_adjoint(Register{0, 3}, count);
    EXPECT_LT(max_diff(s, before), kTol);
  }
}

TEST(Hadamard, LayerAndInvolution) {
  StateVector s(3);
  s.apply_hadamard(Register{1, 2});
  for (BasisLabel r = 0; r < 4; ++r) EXPECT_NEAR(s[r << 1].real(), 0.5, kTol);
  s.apply_hadamard(Register{1, 2});
  EXPECT_NEAR(s[0].real(), 1.0, kTol);
  StateVector f(1);
  f.apply_x(0);
  f.apply_hadamard(0);
  EXPECT_NEAR(f[0].real(), 1.0 / std::sqrt(2.0), kTol);
  EXPECT_NEAR(f[1].real(), -1.0 / std::sqrt(2.0), kTol);
}

TEST(ControlledZ, Definition) {
  StateVector s = random_state(2, 5);
  const StateVector before = s;
  s.apply_cz(0, 1);
  EXPECT_EQ(s[3], -before[3]);
  EXPECT_EQ(s[0], before[0]);
  EXPECT_EQ(s[1], before[1]);
  EXPECT_EQ(s[2], before[2]);
  s.apply_cz(0, 1);
  EXPECT_EQ(max_diff(s, before), 0.0);
}

TEST(Permutation, IdentityAndFlagSwap) {
  StateVector s = random_state(3, 9);
  const StateVector before = s;
  s.apply_permutation([](BasisLabel b) { return b; }, PermutationCheck::kAlways);
  EXPECT_EQ(max_diff(s, before), 0.0);
  s.apply_permutation([](BasisLabel b) { return b ^ 4u; },
                      PermutationCheck::kAlways);
  for (BasisLabel b = 0; b < 8; ++b) EXPECT_EQ(s[b], before[b ^ 4u]);
  s.apply_permutation([](BasisLabel b) { return b ^ 4u; },
                      PermutationCheck::kAlways);
  EXPECT_EQ(max_diff(s, before), 0.0);
}

TEST(Permutation, RejectsNonBijection) {
  StateVector s(3);
  EXPECT_THROW(s.apply_permutation([](BasisLabel) { return BasisLabel{0}; },
                                   PermutationCheck::kAlways),
               std::logic_error);
}

TEST(Permutation, PreservesMagnitudeMultiset) {
  StateVector s = random_state(6, 21);
  std::vector<double> before;
  for (auto a : s.amplitudes()) before.push_back(std::abs(a));
  s.apply_permutation([](BasisLabel b) { return (b * 5 + 3) % 64; },
                      PermutationCheck::kAlways);
  std::vector<double> after;
  for (auto a : s.amplitudes()) after.push_back(std::abs(a));
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  EXPECT_EQ(before, after);
}

TEST(Postselect, UniformTwoQubits) {
  StateVector s(2);
  s.apply_hadamard(0);
  s.apply_hadamard(1);
  const auto out = postselect(s, {{Register{0, 1}, 0}});
  EXPECT_NEAR(out.probability, 0.5, kTol);
  ASSERT_TRUE(out.collapsed.has_value());
  EXPECT_NEAR(out.collapsed->norm_squared(), 1.0, kTol);
  EXPECT_NEAR(std::abs((*out.collapsed)[0]), 1.0 / std::sqrt(2.0), kTol);
  EXPECT_NEAR(std::abs((*out.collapsed)[2]), 1.0 / std::sqrt(2.0), kTol);
}

TEST(Postselect, ImpossibleOutcome) {
  StateVector s(2);
  EXPECT_THROW(postselect(s, {{Register{0, 1}, 1}}), PostselectionError);
}

TEST(Postselect, WorkedExampleFirstStage) {
  const std::vector<std::vector<double>> raw{{0.5}, {-0.25}};
  const auto ds = quantize_dataset(raw, 2);
  const auto layout = RegisterLayout::make(ds.index_bits(), 2);
  StateVector s = StateVector::zero(layout);
  s.apply_uniform_index(layout.index, 2);
  amplitude_transduction(s, layout, DataOracle(ds, 0, OracleKind::kMagnitude));
  const auto out = postselect(s, {{layout.reference, 0}, {layout.flag, 1}});
  EXPECT_NEAR(out.probability, 0.15625, kTol);
}

TEST(ProbabilityOf, FreshAndPartition) {
  StateVector s(3);
  EXPECT_EQ(probability_of(s, {{Register{0, 3}, 0}}), 1.0);
  StateVector r = random_state(4, 77);
  double total = 0.0;
  for (std::uint64_t v = 0; v < 4; ++v) total += probability_of(r, {{Register{1, 2}, v}});
  EXPECT_NEAR(total, 1.0, kTol);
  const double p = probability_of(r, {{Register{0, 1}, 1}});
  const double q = probability_of(r, {{Register{0, 1}, 0}});
  EXPECT_NEAR(p + q, 1.0, kTol);
}

TEST(Sample, DeterministicAndExact) {
  StateVector s(2);
  const Register all{0, 2};
  const auto out = sample(s, std::span<const Register>(&all, 1), 1000, 3);
  ASSERT_EQ(out.counts.size(), 1u);
  EXPECT_EQ(out.counts.at(0), 1000u);
  StateVector u = random_state(3, 4);
  const Register r{0, 3};
  const auto a = sample(u, std::span<const Register>(&r, 1), 5000, 42);
  const auto b = sample(u, std::span<const Register>(&r, 1), 5000, 42);
  EXPECT_EQ(a.counts, b.counts);
  std::uint64_t total = 0;
  for (const auto& [k, v] : a.counts) total += v;
  EXPECT_EQ(total, 5000u);
}

TEST(Sample, UniformQubitFrequency) {
  StateVector s(1);
  s.apply_hadamard(0);
  const Register q{0, 1};
  const auto out = sample(s, std::span<const Register>(&q, 1), 1000000, 8);
  const double f = static_cast<double>(out.counts.at(1)) / 1e6;
  EXPECT_NEAR(f, 0.5, 0.002);
}

TEST(Sample, MarginalConsistency) {
  StateVector s = random_state(5, 13);
  const Register reg{1, 3};
  const std::uint64_t shots = 100000;
  const auto out = sample(s, std::span<const Register>(&reg, 1), shots, 17);
  for (std::uint64_t v = 0; v < 8; ++v) {
    const double p = probability_of(s, {{reg, v}});
    const auto it = out.counts.find(v);
    const double f =
        it == out.counts.end() ? 0.0 : static_cast<double>(it->second) / shots;
    EXPECT_LE(std::abs(f - p), 4.0 * std::sqrt(p * (1 - p) / shots) + 1e-12);
  }
}

TEST(Sample, MatchesAgreesWithProbability) {
  StateVector s = random_state(4, 31);
  const Pattern pat{{Register{0, 2}, 1}, {Register{3, 1}, 0}};
  const double p = probability_of(s, pat);
  StreamRng rng(5);
  const std::uint64_t shots = 200000;
  const double f = static_cast<double>(sample_matches(s, pat, shots, rng)) / shots;
  EXPECT_LE(std::abs(f - p), 4.0 * std::sqrt(p * (1 - p) / shots));
}

TEST(NormProperty, UnitaryOpsPreserveNorm) {
  StateVector s = random_state(6, 99);
  s.apply_hadamard(Register{0, 6});
  s.apply_cx(0, 3);
  s.apply_ccx(1, 2, 5);
  s.apply_cz(2, 4);
  s.apply_x(1);
  s.apply_uniform_index(Register{0, 3}, 6);
  EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
}

TEST(Rng, StreamsIndependentOfOrder) {
  StreamRng a(1, 2, 3);
  StreamRng b(1, 2, 3);
  StreamRng c(1, 3, 3);
  const auto a1 = a();
  EXPECT_EQ(a1, b());
  EXPECT_NE(a1, c());
}

}  // namespace
}  // namespace qgad
