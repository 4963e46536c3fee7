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

#include "qgad/circuits.hpp"

#include <algorithm>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

DataOracle::DataOracle(const QuantizedDataset& dataset, std::size_t feature,
                       OracleKind kind)
    : feature_(feature), kind_(kind), bits_(dataset.bits()) {
  if (feature >= dataset.cols()) {
    std::ostringstream os;
    os << "feature " << feature << " out of range for D = " << dataset.cols();
    throw DomainError(os.str());
  }
  table_.reserve(dataset.rows());
  for (std::size_t i = 0; i < dataset.rows(); ++i) {
    const auto& v = dataset.at(i, feature);
    table_.push_back(kind == OracleKind::kSign ? (v.negative ? 1u : 0u)
                                               : v.magnitude);
  }
}

unsigned DataOracle::target_width() const {
  return kind_ == OracleKind::kSign ? 1 : bits_;
}

void DataOracle::apply(StateVector& state, const Register& index,
                       const Register& target) const {
  if (target.width != target_width()) {
    std::ostringstream os;
    os << "oracle target needs width " << target_width() << ", got "
       << target.width;
    throw LayoutError(os.str());
  }
  if (index.mask() & target.mask()) {
    throw LayoutError("oracle index and target overlap");
  }
  const auto amps = state.amplitudes();
  for (BasisLabel b = 0; b < amps.size(); ++b) {
    if (index.read(b) >= table_.size() && amps[b] != Amplitude{}) {
      std::ostringstream os;
      os << "oracle queried at index " << index.read(b) << " but M = "
         << table_.size();
      throw DataAccessError(os.str());
    }
  }
  const std::size_t rows = table_.size();
  state.apply_permutation([&](BasisLabel b) {
    const std::uint64_t i = index.read(b);
    if (i >= rows) return b;
    return b ^ (static_cast<BasisLabel>(table_[i]) << target.offset);
  });
}

void comparator_apply(StateVector& state, const Register& a,
                      const Register& b, unsigned flag, ComparatorMode mode,
                      std::optional<unsigned> ancilla) {
  if (a.width != b.width) {
    std::ostringstream os;
    os << "comparator registers differ in width: " << a.width << " vs "
       << b.width;
    throw LayoutError(os.str());
  }
  const BasisLabel flag_bit = BasisLabel{1} << flag;
  if ((a.mask() & b.mask()) || ((a.mask() | b.mask()) & flag_bit)) {
    throw LayoutError("comparator registers overlap");
  }

  if (mode == ComparatorMode::kFunctional) {
    state.apply_permutation([&](BasisLabel label) {
      return a.read(label) > b.read(label) ? label ^ flag_bit : label;
    });
    return;
  }

  if (!ancilla) throw LayoutError("gate-level comparator needs an ancilla");
  const Circuit circuit = comparator_gate_level(a.width);
  std::vector<unsigned> wires;
  for (unsigned k = 0; k < a.width; ++k) wires.push_back(a.offset + k);
  for (unsigned k = 0; k < b.width; ++k) wires.push_back(b.offset + k);
  wires.push_back(*ancilla);
  wires.push_back(flag);
  circuit.apply(state, wires);
}

void Circuit::apply(StateVector& state,
                    std::span<const unsigned> wire_to_qubit) const {
  if (wire_to_qubit.size() != num_wires) {
    throw LayoutError("circuit wire map has the wrong size");
  }
  for (const Gate& g : gates) {
    const auto q = [&](int slot) { return wire_to_qubit[g.wires[slot]]; };
    switch (g.kind) {
      case GateKind::kX:
        state.apply_x(q(0));
        break;
      case GateKind::kCX:
        state.apply_cx(q(0), q(1));
        break;
      case GateKind::kCCX:
        state.apply_ccx(q(0), q(1), q(2));
        break;
    }
  }
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      gates.begin(), gates.end(),
      [kind](const Gate& g) { return g.kind == kind; }));
}

Circuit comparator_gate_level(unsigned n) {
  if (n < 1 || n > kGateLevelMaxWidth) {
    std::ostringstream os;
    os << "gate-level comparator supports widths 1.." << kGateLevelMaxWidth
       << ", got " << n;
    throw UnsupportedWidthError(os.str());
  }
  Circuit c;
  c.num_wires = 2 * n + 2;
  const auto a = [](unsigned i) { return i; };
  const auto b = [n](unsigned i) { return n + i; };
  const unsigned carry = 2 * n;
  const unsigned flag = 2 * n + 1;

  auto maj = [&](unsigned x, unsigned y, unsigned z) {
    c.gates.push_back({GateKind::kCX, {z, y, 0}});
    c.gates.push_back({GateKind::kCX, {z, x, 0}});
    c.gates.push_back({GateKind::kCCX, {x, y, z}});
  };
  auto maj_inverse = [&](unsigned x, unsigned y, unsigned z) {
    c.gates.push_back({GateKind::kCCX, {x, y, z}});
    c.gates.push_back({GateKind::kCX, {z, x, 0}});
    c.gates.push_back({GateKind::kCX, {z, y, 0}});
  };

  for (unsigned i = 0; i < n; ++i) c.gates.push_back({GateKind::kX, {b(i), 0, 0}});
  // After the ladder a(n-1) holds the carry-out of a + ~b, i.e. [a > b].
  maj(carry, b(0), a(0));
  for (unsigned i = 1; i < n; ++i) maj(a(i - 1), b(i), a(i));
  c.gates.push_back({GateKind::kCX, {a(n - 1), flag, 0}});
  for (unsigned i = n; i-- > 1;) maj_inverse(a(i - 1), b(i), a(i));
  maj_inverse(carry, b(0), a(0));
  for (unsigned i = 0; i < n; ++i) c.gates.push_back({GateKind::kX, {b(i), 0, 0}});
  return c;
}

void amplitude_transduction(StateVector& state, const RegisterLayout& layout,
                            const DataOracle& magnitude_oracle,
                            ComparatorMode mode) {
  if (magnitude_oracle.kind() != OracleKind::kMagnitude) {
    throw LayoutError("transduction needs a magnitude oracle");
  }
  const BasisLabel must_be_zero =
      layout.data.mask() | layout.reference.mask() | layout.flag.mask();
  const auto amps = state.amplitudes();
  for (BasisLabel b = 0; b < amps.size(); ++b) {
    if ((b & must_be_zero) && amps[b] != Amplitude{}) {
      throw LayoutError(
          "transduction needs zero data, reference and flag registers");
    }
  }
  if (mode == ComparatorMode::kGateLevel) {
    throw LayoutError(
        "the pipeline layout has no carry ancilla; use the functional "
        "comparator");
  }

  magnitude_oracle.apply(state, layout.index, layout.data);
  state.apply_hadamard(layout.reference);
  comparator_apply(state, layout.data, layout.reference, layout.flag.qubit(),
                   mode);
  state.apply_hadamard(layout.reference);
  magnitude_oracle.apply(state, layout.index, layout.data);
}

void signed_load(StateVector& state, const RegisterLayout& layout,
                 const DataOracle& sign_oracle) {
  if (sign_oracle.kind() != OracleKind::kSign) {
    throw LayoutError("signed load needs a sign oracle");
  }
  sign_oracle.apply(state, layout.index, layout.sign);
  state.apply_cz(layout.sign.qubit(), layout.flag.qubit());
  sign_oracle.apply(state, layout.index, layout.sign);
}

void signed_load_pair(StateVector& state, const RegisterLayout& layout,
                      const DataOracle& sign_j, const DataOracle& sign_k) {
  if (sign_j.kind() != OracleKind::kSign || sign_k.kind() != OracleKind::kSign) {
    throw LayoutError("signed load needs sign oracles");
  }
  sign_j.apply(state, layout.index, layout.sign);
  sign_k.apply(state, layout.index, layout.sign);
  state.apply_cz(layout.sign.qubit(), layout.flag.qubit());
  sign_k.apply(state, layout.index, layout.sign);
  sign_j.apply(state, layout.index, layout.sign);
}

}  // namespace qgad
