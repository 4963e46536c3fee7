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

#include "qgad/fixedpoint.hpp"

#include <cmath>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

void check_bits(unsigned bits) {
  if (bits < 1 || bits > kMaxBits) {
    std::ostringstream os;
    os << "precision must be in [1, " << kMaxBits << "], got " << bits;
    throw DomainError(os.str());
  }
}

// Unclamped rounded magnitude, or throws if |raw| >= 1.
std::uint64_t rounded_magnitude(double raw, unsigned bits) {
  check_bits(bits);
  if (!(std::abs(raw) < 1.0)) {
    std::ostringstream os;
    os << "value " << raw << " outside the open interval (-1, 1)";
    throw DomainError(os.str());
  }
  return static_cast<std::uint64_t>(
      std::round(std::ldexp(std::abs(raw), static_cast<int>(bits))));
}

}  // namespace

FixedPointValue make_fixed_point(bool negative, std::uint32_t magnitude,
                                 unsigned bits) {
  check_bits(bits);
  if (magnitude > (1u << bits) - 1) {
    std::ostringstream os;
    os << "magnitude " << magnitude << " does not fit in " << bits << " bits";
    throw DomainError(os.str());
  }
  return FixedPointValue{negative && magnitude != 0, magnitude, bits};
}

FixedPointValue quantize(double raw, unsigned bits) {
  const std::uint64_t max_mag = (std::uint64_t{1} << bits) - 1;
  std::uint64_t mag = rounded_magnitude(raw, bits);
  if (mag > max_mag) mag = max_mag;
  return make_fixed_point(raw < 0.0, static_cast<std::uint32_t>(mag), bits);
}

bool quantize_clamps(double raw, unsigned bits) {
  return rounded_magnitude(raw, bits) > (std::uint64_t{1} << bits) - 1;
}

double decode(const FixedPointValue& v) {
  const double mag = std::ldexp(static_cast<double>(v.magnitude),
                                -static_cast<int>(v.bits));
  return v.negative ? -mag : mag;
}

unsigned ceil_log2(std::size_t count) {
  unsigned m = 0;
  while ((std::size_t{1} << m) < count) ++m;
  return m;
}

QuantizedDataset::QuantizedDataset(std::size_t rows, std::size_t cols,
                                   unsigned bits,
                                   std::vector<FixedPointValue> values)
    : rows_(rows),
      cols_(cols),
      bits_(bits),
      index_bits_(ceil_log2(rows)),
      values_(std::move(values)) {
  check_bits(bits);
  if (rows < 1 || cols < 1) throw FormatError("dataset must be non-empty");
  if (values_.size() != rows * cols) {
    throw FormatError("dataset value count does not match its shape");
  }
  for (const auto& v : values_) {
    if (v.bits != bits) throw DomainError("dataset mixes precisions");
  }
}

std::vector<double> QuantizedDataset::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = value(i, j);
  return out;
}

QuantizedDataset quantize_dataset(std::span<const std::vector<double>> raw,
                                  unsigned bits, std::size_t min_rows) {
  check_bits(bits);
  if (raw.size() < min_rows || raw.empty()) {
    std::ostringstream os;
    os << "dataset needs at least " << min_rows << " rows, got " << raw.size();
    throw FormatError(os.str());
  }
  const std::size_t cols = raw.front().size();
  if (cols == 0) throw FormatError("dataset rows are empty");

  std::vector<FixedPointValue> values;
  values.reserve(raw.size() * cols);
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != cols) {
      std::ostringstream os;
      os << "row " << i << " has " << raw[i].size() << " entries, expected "
         << cols;
      throw FormatError(os.str());
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = raw[i][j];
      if (!(std::abs(x) < 1.0)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << x
           << " outside the open interval (-1, 1)";
        throw DomainError(os.str());
      }
      if (quantize_clamps(x, bits)) ++clamped;
      values.push_back(quantize(x, bits));
    }
  }
  QuantizedDataset ds(raw.size(), cols, bits, std::move(values));
  ds.set_clamped_cells(clamped);
  return ds;
}

}  // namespace qgad
