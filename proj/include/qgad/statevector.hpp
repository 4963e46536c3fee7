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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qgad/rng.hpp"

namespace qgad {

using Amplitude = std::complex<double>;
using BasisLabel = std::uint64_t;

inline constexpr unsigned kDefaultQubitCap = 26;

/// Below this probability a postselection is treated as impossible.
inline constexpr double kPostselectFloor = 1e-14;

/// A contiguous run of qubits inside a basis label. Qubit k is bit k.
struct Register {
  unsigned offset = 0;
  unsigned width = 0;

  BasisLabel mask() const {
    return width == 0 ? 0 : (((BasisLabel{1} << width) - 1) << offset);
  }
  std::uint64_t read(BasisLabel label) const {
    return (label & mask()) >> offset;
  }
  BasisLabel write(BasisLabel label, std::uint64_t value) const {
    return (label & ~mask()) | ((value << offset) & mask());
  }
  /// Single-qubit registers only.
  unsigned qubit() const { return offset; }

  friend bool operator==(const Register&, const Register&) = default;
};

/// Index, sign, data, reference and flag registers packed from bit 0 up.
struct RegisterLayout {
  Register index;
  Register sign;
  Register data;
  Register reference;
  Register flag;

  unsigned total_qubits() const {
    return index.width + sign.width + data.width + reference.width +
           flag.width;
  }

  /// q = index_bits + 2 * data_bits + 2.
  static RegisterLayout make(unsigned index_bits, unsigned data_bits);
};

/// (register, value) pairs describing a partial basis pattern.
using Pattern = std::vector<std::pair<Register, std::uint64_t>>;

enum class PermutationCheck {
  kDebugOnly,  // full bijection check in debug builds when q <= 16
  kAlways,
  kNever,
};

class StateVector {
 public:
  /// All-zeros state on `qubits` qubits. Throws ResourceError above the cap.
  explicit StateVector(unsigned qubits, unsigned qubit_cap = kDefaultQubitCap);

  static StateVector zero(const RegisterLayout& layout,
                          unsigned qubit_cap = kDefaultQubitCap) {
    return StateVector(layout.total_qubits(), qubit_cap);
  }

  unsigned qubits() const { return qubits_; }
  std::size_t size() const { return amps_.size(); }

  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }
  const Amplitude& operator[](BasisLabel b) const { return amps_[b]; }
  Amplitude& operator[](BasisLabel b) { return amps_[b]; }

  double norm_squared() const;

  void apply_hadamard(unsigned qubit);
  void apply_hadamard(const Register& reg);
  void apply_x(unsigned qubit);
  void apply_cx(unsigned control, unsigned target);
  void apply_ccx(unsigned control_a, unsigned control_b, unsigned target);
  /// Negates amplitudes whose control and target bits are both 1.
  void apply_cz(unsigned control, unsigned target);

  /// U_M on the index register: maps |0> to the uniform superposition over
  /// indices [0, count). H on every qubit when count is a power of two,
  /// otherwise a Householder reflection. Both choices are self-inverse.
  void apply_uniform_index(const Register& index, std::size_t count);
  void apply_uniform_index_adjoint(const Register& index, std::size_t count) {
    apply_uniform_index(index, count);
  }

  /// Moves the amplitude of basis b to f(b). Throws std::logic_error when f
  /// is detected not to be a bijection on [0, 2^q).
  template <class F>
  void apply_permutation(F&& f,
                         PermutationCheck check = PermutationCheck::kDebugOnly);

 private:
  void check_qubit(unsigned q) const;
  bool wants_full_check(PermutationCheck check) const;

  unsigned qubits_;
  std::vector<Amplitude> amps_;
};

struct MeasurementOutcome {
  double probability = 0.0;
  std::optional<StateVector> collapsed;
  /// Observed joint register value -> tally, shot mode only. The first
  /// sampled register occupies the lowest bits of the key.
  std::map<std::uint64_t, std::uint64_t> counts;
};

/// Sum of |amplitude|^2 over basis states matching every pattern entry.
double probability_of(const StateVector& state, const Pattern& pattern);

/// Projects onto the pattern and renormalizes. Throws PostselectionError when
/// the outcome probability is below kPostselectFloor.
MeasurementOutcome postselect(const StateVector& state, const Pattern& pattern);

/// Draws `shots` i.i.d. outcomes of the joint marginal over `registers`.
MeasurementOutcome sample(const StateVector& state,
                          std::span<const Register> registers,
                          std::uint64_t shots, StreamRng& rng);
MeasurementOutcome sample(const StateVector& state,
                          std::span<const Register> registers,
                          std::uint64_t shots, std::uint64_t seed);

/// Number of hits on `pattern` out of `shots` measurements.
std::uint64_t sample_matches(const StateVector& state, const Pattern& pattern,
                             std::uint64_t shots, StreamRng& rng);

/// Binomial(trials, p) draw, shared by every sampler in the library.
std::uint64_t draw_binomial(std::uint64_t trials, double p, StreamRng& rng);

template <class F>
void StateVector::apply_permutation(F&& f, PermutationCheck check) {
  const BasisLabel n = amps_.size();
  if (wants_full_check(check)) {
    std::vector<char> hit(n, 0);
    for (BasisLabel b = 0; b < n; ++b) {
      const BasisLabel t = f(b);
      if (t >= n || hit[t]) {
        throw std::logic_error("permutation oracle is not a bijection");
      }
      hit[t] = 1;
    }
  }
  // Cycle-following; a revisit off the cycle start means f is not bijective.
  std::vector<char> seen(n, 0);
  for (BasisLabel start = 0; start < n; ++start) {
    if (seen[start]) continue;
    seen[start] = 1;
    BasisLabel next = f(start);
    if (next == start) continue;
    Amplitude carry = amps_[start];
    while (next != start) {
      if (next >= n || seen[next]) {
        throw std::logic_error("permutation oracle is not a bijection");
      }
      seen[next] = 1;
      std::swap(carry, amps_[next]);
      next = f(next);
    }
    amps_[start] = carry;
  }
}

}  // namespace qgad
