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


#include "qgad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qgad/circuits.hpp"
#include "qgad/errors.hpp"
#include "qgad/estimators.hpp"
#include "qgad/gad.hpp"
#include "qgad/signtest.hpp"
#include "qgad/statevector.hpp"
#include "qgad/synthetic.hpp"

namespace qgad {

namespace {

constexpr double kAmplitudeTolerance = 1e-12;
constexpr double kEquivalenceTolerance = 1e-10;

double max_deviation(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

// Random real state over the first `count` labels of a register that starts
// at bit 0.
void fill_random_prefix(StateVector& s, std::size_t count, StreamRng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    s[i] = normal(rng);
    norm += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < count; ++i) s[i] /= std::sqrt(norm);
}

}  // namespace

SuiteResult verify_comparator() {
  SuiteResult r;
  r.name = "comparator";
  for (unsigned n = 1; n <= 4; ++n) {
    const Register a{0, n};
    const Register b{n, n};
    const unsigned flag = 2 * n;
    for (std::uint64_t x = 0; x < (1u << n); ++x) {
      for (std::uint64_t y = 0; y < (1u << n); ++y) {
        StateVector s(2 * n + 1);
        s[0] = 0.0;
        const BasisLabel in = b.write(a.write(0, x), y);
        s[in] = 1.0;
        comparator_apply(s, a, b, flag);
        const BasisLabel expect = in | (x > y ? (BasisLabel{1} << flag) : 0);
        ++r.cases;
        if (std::abs(s[expect] - 1.0) > kAmplitudeTolerance) ++r.failures;
      }
    }
  }
  StreamRng rng(0xC0FFEE);
  for (unsigned n = 1; n <= kGateLevelMaxWidth; ++n) {
    const Register a{0, n};
    const Register b{n, n};
    const unsigned carry = 2 * n;
    const unsigned flag = 2 * n + 1;
    const std::size_t inputs = std::size_t{1} << (2 * n + 1);
    // Every basis input (carry clear, flag either way) plus one random
    // superposition over them.
    for (std::size_t t = 0; t <= inputs; ++t) {
      StateVector f(2 * n + 2);
      if (t < inputs) {
        f[0] = 0.0;
        const BasisLabel lo = t & ((BasisLabel{1} << (2 * n)) - 1);
        const BasisLabel hi = (t >> (2 * n)) << flag;
        f[lo | hi] = 1.0;
      } else {
        StateVector tmp(2 * n + 1);
        fill_random_prefix(tmp, inputs, rng);
        f[0] = 0.0;
        for (std::size_t i = 0; i < inputs; ++i) {
          const BasisLabel lo = i & ((BasisLabel{1} << (2 * n)) - 1);
          const BasisLabel hi = (i >> (2 * n)) << flag;
          f[lo | hi] = tmp[i];
        }
      }
      StateVector g = f;
      comparator_apply(f, a, b, flag, ComparatorMode::kFunctional);
      comparator_apply(g, a, b, flag, ComparatorMode::kGateLevel, carry);
      const double dev = max_deviation(f, g);
      r.worst = std::max(r.worst, dev);
      ++r.cases;
      if (!(dev < kAmplitudeTolerance)) ++r.failures;
    }
  }
  r.passed = r.failures == 0;
  std::ostringstream os;
  os << "functional n<=4 and gate-level n<=" << kGateLevelMaxWidth
     << ", max gate-level deviation " << r.worst;
  r.detail = os.str();
  return r;
}

SuiteResult verify_transduction(std::uint64_t seed, std::size_t datasets,
                                std::size_t max_rows, unsigned max_bits) {
  SuiteResult r;
  r.name = "transduction";
  StreamRng rng(seed, 0, 0x7A);
  for (std::size_t t = 0; t < datasets; ++t) {
    const std::size_t rows =
        std::uniform_int_distribution<std::size_t>(2, max_rows)(rng);
    const unsigned bits =
        std::uniform_int_distribution<unsigned>(1, max_bits)(rng);
    const QuantizedDataset ds = random_quantized_dataset(rows, 1, bits, rng);
    const RegisterLayout layout = RegisterLayout::make(ds.index_bits(), bits);
    StateVector s = StateVector::zero(layout);
    fill_random_prefix(s, rows, rng);
    const StateVector prior = s;
    amplitude_transduction(s, layout, DataOracle(ds, 0, OracleKind::kMagnitude));
    const double scale = std::ldexp(1.0, -static_cast<int>(bits));
    for (std::size_t i = 0; i < rows; ++i) {
      const double frac = ds.at(i, 0).magnitude * scale;
      const BasisLabel base = layout.index.write(0, i);
      const BasisLabel one = layout.flag.write(base, 1);
      const double dev1 = std::abs(s[one] - prior[base] * frac);
      const double dev0 = std::abs(s[base] - prior[base] * (1.0 - frac));
      const double dev = std::max(dev1, dev0);
      r.worst = std::max(r.worst, dev);
      ++r.cases;
      if (!(dev <= kAmplitudeTolerance)) ++r.failures;
    }
  }
  r.passed = r.failures == 0;
  std::ostringstream os;
  os << datasets << " datasets, max amplitude deviation " << r.worst;
  r.detail = os.str();
  return r;
}

SuiteResult verify_signtest(std::uint64_t seed, double delta,
                            std::size_t trials) {
  SuiteResult r;
  r.name = "signtest";
  const double band =
      delta + 2.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
  double worst_rate = 0.0;
  double worst_exact = 0.0;
  std::uint64_t point = 0;
  for (int ai = -9; ai <= 9; ++ai) {
    const double theta = ai * 0.17;
    const double alpha = std::sin(theta);
    const double beta = std::cos(theta);
    const double exact = exact_sign_test([&] {
      return single_qubit_flag(alpha, beta);
    }).p_hat;
    worst_exact = std::max(worst_exact, std::abs(exact - (0.5 - alpha * beta)));
    ++r.cases;
    if (!(std::abs(exact - (0.5 - alpha * beta)) <= 1e-12)) ++r.failures;
    if (std::abs(alpha * beta) < 0.05) continue;
    const std::uint64_t shots =
        required_shots(std::abs(alpha), std::abs(beta), delta);
    const Sign truth = alpha * beta >= 0.0 ? Sign::kNonNegative : Sign::kNegative;
    std::size_t wrong = 0;
    for (std::size_t k = 0; k < trials; ++k) {
      StreamRng trng(seed, point, k);
      const SignVerdict v = run_sign_test(
          [&] { return single_qubit_flag(alpha, beta); }, shots, trng);
      if (v.sign != truth) ++wrong;
    }
    const double rate = static_cast<double>(wrong) / static_cast<double>(trials);
    worst_rate = std::max(worst_rate, rate);
    ++r.cases;
    if (rate > band) ++r.failures;
    ++point;
  }
  r.worst = worst_rate;
  r.passed = r.failures == 0;
  std::ostringstream os;
  os << "max exact P_s deviation " << worst_exact << ", worst wrong-sign rate "
     << worst_rate << " (band " << band << ")";
  r.detail = os.str();
  return r;
}

SuiteResult verify_equivalence(std::uint64_t seed, std::size_t datasets,
                               std::size_t max_rows, std::size_t max_cols,
                               unsigned max_bits) {
  SuiteResult r;
  r.name = "equivalence";
  StreamRng rng(seed, 0, 0xE0);
  EstimationBudget budget;
  budget.mode = Backend::kExact;
  for (std::size_t t = 0; t < datasets; ++t) {
    const std::size_t rows =
        std::uniform_int_distribution<std::size_t>(2, max_rows)(rng);
    const std::size_t cols =
        std::uniform_int_distribution<std::size_t>(1, max_cols)(rng);
    const unsigned bits =
        std::uniform_int_distribution<unsigned>(1, max_bits)(rng);
    const QuantizedDataset ds = random_quantized_dataset(rows, cols, bits, rng);
    const EstimateReport rep = fit(ds, budget);
    const auto [mu, c] = classical_moments(ds);
    const double dev = std::max((rep.mu_hat - mu).cwiseAbs().maxCoeff(),
                                (rep.cov_hat - c).cwiseAbs().maxCoeff());
    r.worst = std::max(r.worst, dev);
    ++r.cases;
    if (!(dev <= kEquivalenceTolerance)) ++r.failures;
  }
  r.passed = r.failures == 0;
  std::ostringstream os;
  os << datasets << " datasets, max |quantum - classical| " << r.worst;
  r.detail = os.str();
  return r;
}

std::vector<std::string> verify_suite_names() {
  return {"comparator", "transduction", "signtest", "equivalence"};
}

std::vector<SuiteResult> run_verify(const std::string& suite,
                                    std::uint64_t seed) {
  std::vector<SuiteResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "comparator") {
    out.push_back(verify_comparator());
    known = true;
  }
  if (all || suite == "transduction") {
    out.push_back(verify_transduction(seed));
    known = true;
  }
  if (all || suite == "signtest") {
    out.push_back(verify_signtest(seed));
    known = true;
  }
  if (all || suite == "equivalence") {
    out.push_back(verify_equivalence(seed));
    known = true;
  }
  if (!known) throw UsageError("unknown verify suite '" + suite + "'");
  return out;
}

}  // namespace qgad
