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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qgad/fixedpoint.hpp"
#include "qgad/statevector.hpp"

namespace qgad {

enum class OracleKind { kSign, kMagnitude };

/// XOR oracle exposing one feature column: |i>|t> -> |i>|t ^ bits(x_ij)>.
/// The sign oracle writes the sign bit, the magnitude oracle the n-bit
/// magnitude. Self-inverse.
class DataOracle {
 public:
  DataOracle(const QuantizedDataset& dataset, std::size_t feature,
             OracleKind kind);

  std::size_t feature() const { return feature_; }
  OracleKind kind() const { return kind_; }
  unsigned target_width() const;

  /// Throws LayoutError on a target width mismatch and DataAccessError when
  /// an index >= M carries amplitude.
  void apply(StateVector& state, const Register& index,
             const Register& target) const;

 private:
  std::size_t feature_;
  OracleKind kind_;
  unsigned bits_;
  std::vector<std::uint32_t> table_;
};

enum class ComparatorMode { kFunctional, kGateLevel };

inline constexpr unsigned kGateLevelMaxWidth = 3;

/// flag ^= [a > b]; a and b unchanged. Functional mode applies the basis
/// permutation directly; gate-level mode runs the MAJ ladder and needs a
/// carry ancilla that starts (and ends) in |0>.
void comparator_apply(StateVector& state, const Register& a,
                      const Register& b, unsigned flag,
                      ComparatorMode mode = ComparatorMode::kFunctional,
                      std::optional<unsigned> ancilla = std::nullopt);

enum class GateKind { kX, kCX, kCCX };

struct Gate {
  GateKind kind;
  // Controls first, target last; unused slots are ignored.
  std::array<unsigned, 3> wires;
};

/// A gate list over local wires 0..num_wires-1.
struct Circuit {
  unsigned num_wires = 0;
  std::vector<Gate> gates;

  /// Runs the circuit with wire w bound to state qubit wire_to_qubit[w].
  void apply(StateVector& state, std::span<const unsigned> wire_to_qubit) const;
  std::size_t count(GateKind kind) const;
};

/// Ripple comparator over wires a = [0, n), b = [n, 2n), carry = 2n,
/// flag = 2n + 1. Flips flag iff a > b by taking the carry-out of a + ~b.
/// Throws UnsupportedWidthError for n > kGateLevelMaxWidth.
Circuit comparator_gate_level(unsigned n);

/// U_AT: magnitude oracle, H on reference, comparator(data > reference),
/// H on reference, magnitude oracle again. On the reference = 0 slice the
/// flag ends in (mag/2^n)|1> + (1 - mag/2^n)|0> for every populated index.
/// Throws LayoutError unless data, reference and flag are zero wherever the
/// state is populated.
void amplitude_transduction(StateVector& state, const RegisterLayout& layout,
                            const DataOracle& magnitude_oracle,
                            ComparatorMode mode = ComparatorMode::kFunctional);

/// Sign oracle, CZ(sign, flag), sign oracle: turns |x_ij| into x_ij on the
/// flag-1 branch and leaves the sign register at zero.
void signed_load(StateVector& state, const RegisterLayout& layout,
                 const DataOracle& sign_oracle);

/// Loads sign(x_ij) * sign(x_ik) onto the flag-1 branch.
void signed_load_pair(StateVector& state, const RegisterLayout& layout,
                      const DataOracle& sign_j, const DataOracle& sign_k);

}  // namespace qgad
