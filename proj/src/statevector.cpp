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

#include "qgad/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct CompiledPattern {
  BasisLabel mask = 0;
  BasisLabel value = 0;
};

CompiledPattern compile(const Pattern& pattern, unsigned qubits) {
  CompiledPattern out;
  for (const auto& [reg, value] : pattern) {
    if (reg.offset + reg.width > qubits) {
      throw LayoutError("pattern register exceeds the state width");
    }
    if (reg.width < 64 && value >> reg.width != 0) {
      throw LayoutError("pattern value does not fit its register");
    }
    if (out.mask & reg.mask()) {
      throw LayoutError("pattern registers overlap");
    }
    out.mask |= reg.mask();
    out.value = reg.write(out.value, value);
  }
  return out;
}

}  // namespace

RegisterLayout RegisterLayout::make(unsigned index_bits, unsigned data_bits) {
  RegisterLayout l;
  l.index = {0, index_bits};
  l.sign = {index_bits, 1};
  l.data = {index_bits + 1, data_bits};
  l.reference = {index_bits + 1 + data_bits, data_bits};
  l.flag = {index_bits + 1 + 2 * data_bits, 1};
  return l;
}

StateVector::StateVector(unsigned qubits, unsigned qubit_cap)
    : qubits_(qubits) {
  if (qubits > qubit_cap) {
    std::ostringstream os;
    os << "state needs " << qubits << " qubits, cap is " << qubit_cap;
    throw ResourceError(os.str());
  }
  amps_.assign(std::size_t{1} << qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::check_qubit(unsigned q) const {
  if (q >= qubits_) {
    std::ostringstream os;
    os << "qubit " << q << " out of range for a " << qubits_ << "-qubit state";
    throw LayoutError(os.str());
  }
}

bool StateVector::wants_full_check(PermutationCheck check) const {
  switch (check) {
    case PermutationCheck::kAlways:
      return true;
    case PermutationCheck::kNever:
      return false;
    case PermutationCheck::kDebugOnly:
#ifndef NDEBUG
      return qubits_ <= 16;
#else
      return false;
#endif
  }
  return false;
}

void StateVector::apply_hadamard(unsigned qubit) {
  check_qubit(qubit);
  const BasisLabel bit = BasisLabel{1} << qubit;
  const BasisLabel n = amps_.size();
  for (BasisLabel hi = 0; hi < n; hi += 2 * bit) {
    for (BasisLabel b = hi; b < hi + bit; ++b) {
      const Amplitude a0 = amps_[b];
      const Amplitude a1 = amps_[b | bit];
      amps_[b] = (a0 + a1) * kInvSqrt2;
      amps_[b | bit] = (a0 - a1) * kInvSqrt2;
    }
  }
}

void StateVector::apply_hadamard(const Register& reg) {
  for (unsigned k = 0; k < reg.width; ++k) apply_hadamard(reg.offset + k);
}

void StateVector::apply_x(unsigned qubit) {
  check_qubit(qubit);
  const BasisLabel bit = BasisLabel{1} << qubit;
  for (BasisLabel b = 0; b < amps_.size(); ++b) {
    if (!(b & bit)) std::swap(amps_[b], amps_[b | bit]);
  }
}

void StateVector::apply_cx(unsigned control, unsigned target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw LayoutError("CX control equals target");
  const BasisLabel c = BasisLabel{1} << control;
  const BasisLabel t = BasisLabel{1} << target;
  for (BasisLabel b = 0; b < amps_.size(); ++b) {
    if ((b & c) && !(b & t)) std::swap(amps_[b], amps_[b | t]);
  }
}

void StateVector::apply_ccx(unsigned control_a, unsigned control_b,
                            unsigned target) {
  check_qubit(control_a);
  check_qubit(control_b);
  check_qubit(target);
  if (control_a == control_b || control_a == target || control_b == target) {
    throw LayoutError("CCX qubits must be distinct");
  }
  const BasisLabel cs = (BasisLabel{1} << control_a) |
                        (BasisLabel{1} << control_b);
  const BasisLabel t = BasisLabel{1} << target;
  for (BasisLabel b = 0; b < amps_.size(); ++b) {
    if ((b & cs) == cs && !(b & t)) std::swap(amps_[b], amps_[b | t]);
  }
}

void StateVector::apply_cz(unsigned control, unsigned target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw LayoutError("CZ control equals target");
  const BasisLabel both = (BasisLabel{1} << control) |
                          (BasisLabel{1} << target);
  for (BasisLabel b = 0; b < amps_.size(); ++b) {
    if ((b & both) == both) amps_[b] = -amps_[b];
  }
}

void StateVector::apply_uniform_index(const Register& index,
                                      std::size_t count) {
  if (index.offset + index.width > qubits_) {
    throw LayoutError("index register exceeds the state width");
  }
  const std::size_t span = std::size_t{1} << index.width;
  if (count < 1 || count > span) {
    std::ostringstream os;
    os << "cannot spread over " << count << " indices with a "
       << index.width << "-qubit register";
    throw LayoutError(os.str());
  }
  if (count == 1) return;
  if (count == span) {
    apply_hadamard(index);
    return;
  }

  // Householder reflection I - 2 v v^T / (v^T v) with v = e_0 - u, where u is
  // the uniform vector on [0, count). It swaps e_0 and u.
  const double u = 1.0 / std::sqrt(static_cast<double>(count));
  const double v0 = 1.0 - u;
  const double vv = v0 * v0 + static_cast<double>(count - 1) * u * u;
  const double scale = 2.0 / vv;
  const BasisLabel mask = index.mask();
  for (BasisLabel base = 0; base < amps_.size(); ++base) {
    if (base & mask) continue;
    auto at = [&](std::size_t i) -> Amplitude& {
      return amps_[base | (BasisLabel{i} << index.offset)];
    };
    Amplitude dot = v0 * at(0);
    for (std::size_t i = 1; i < count; ++i) dot -= u * at(i);
    dot *= scale;
    at(0) -= v0 * dot;
    for (std::size_t i = 1; i < count; ++i) at(i) += u * dot;
  }
}

double probability_of(const StateVector& state, const Pattern& pattern) {
  const CompiledPattern p = compile(pattern, state.qubits());
  double s = 0.0;
  const auto amps = state.amplitudes();
  for (BasisLabel b = 0; b < amps.size(); ++b) {
    if ((b & p.mask) == p.value) s += std::norm(amps[b]);
  }
  return s;
}

MeasurementOutcome postselect(const StateVector& state,
                              const Pattern& pattern) {
  const CompiledPattern p = compile(pattern, state.qubits());
  MeasurementOutcome out;
  out.probability = probability_of(state, pattern);
  if (out.probability < kPostselectFloor) {
    std::ostringstream os;
    os << "postselection impossible: outcome probability "
       << out.probability;
    throw PostselectionError(os.str());
  }
  StateVector collapsed = state;
  const double scale = 1.0 / std::sqrt(out.probability);
  auto amps = collapsed.amplitudes();
  for (BasisLabel b = 0; b < amps.size(); ++b) {
    amps[b] = (b & p.mask) == p.value ? amps[b] * scale : Amplitude{};
  }
  out.collapsed = std::move(collapsed);
  return out;
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, StreamRng& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

MeasurementOutcome sample(const StateVector& state,
                          std::span<const Register> registers,
                          std::uint64_t shots, StreamRng& rng) {
  if (shots < 1) throw DomainError("sample needs at least one shot");
  BasisLabel used = 0;
  unsigned key_bits = 0;
  for (const auto& reg : registers) {
    if (reg.offset + reg.width > state.qubits()) {
      throw LayoutError("sampled register exceeds the state width");
    }
    if (used & reg.mask()) throw LayoutError("sampled registers overlap");
    used |= reg.mask();
    key_bits += reg.width;
  }
  if (key_bits > state.qubits()) throw LayoutError("too many sampled qubits");

  std::vector<double> marginal(std::size_t{1} << key_bits, 0.0);
  const auto amps = state.amplitudes();
  for (BasisLabel b = 0; b < amps.size(); ++b) {
    const double pb = std::norm(amps[b]);
    if (pb == 0.0) continue;
    std::uint64_t key = 0;
    unsigned shift = 0;
    for (const auto& reg : registers) {
      key |= reg.read(b) << shift;
      shift += reg.width;
    }
    marginal[key] += pb;
  }

  MeasurementOutcome out;
  out.probability = 1.0;
  // Multinomial via a chain of conditional binomials.
  double remaining_mass = 0.0;
  for (double p : marginal) remaining_mass += p;
  std::uint64_t remaining = shots;
  std::uint64_t last_nonzero = 0;
  for (std::uint64_t k = 0; k < marginal.size(); ++k) {
    if (marginal[k] > 0.0) last_nonzero = k;
  }
  for (std::uint64_t k = 0; k < marginal.size() && remaining > 0; ++k) {
    if (marginal[k] <= 0.0) continue;
    std::uint64_t c;
    if (k == last_nonzero || remaining_mass <= marginal[k]) {
      c = remaining;
    } else {
      c = draw_binomial(remaining, marginal[k] / remaining_mass, rng);
    }
    if (c > 0) out.counts[k] = c;
    remaining -= c;
    remaining_mass -= marginal[k];
  }
  return out;
}

MeasurementOutcome sample(const StateVector& state,
                          std::span<const Register> registers,
                          std::uint64_t shots, std::uint64_t seed) {
  StreamRng rng(seed);
  return sample(state, registers, shots, rng);
}

std::uint64_t sample_matches(const StateVector& state, const Pattern& pattern,
                             std::uint64_t shots, StreamRng& rng) {
  const double p = std::clamp(probability_of(state, pattern), 0.0, 1.0);
  return draw_binomial(shots, p, rng);
}

}  // namespace qgad
