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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qgad {

inline constexpr unsigned kMaxBits = 16;

/// Sign bit plus an n-bit magnitude; decodes to (-1)^sign * magnitude / 2^n,
/// always strictly inside (-1, 1). Zero is always stored with sign 0.
struct FixedPointValue {
  bool negative = false;
  std::uint32_t magnitude = 0;
  unsigned bits = 1;

  friend bool operator==(const FixedPointValue&,
                         const FixedPointValue&) = default;
};

/// Builds a value from its parts, normalizing negative zero.
/// Throws DomainError when the magnitude needs more than `bits` bits.
FixedPointValue make_fixed_point(bool negative, std::uint32_t magnitude,
                                 unsigned bits);

/// Round-to-nearest (ties away from zero) quantization of `raw` in (-1, 1).
/// Magnitudes that would round up to 2^n are clamped to 2^n - 1.
FixedPointValue quantize(double raw, unsigned bits);

/// True when quantize(raw, bits) had to clamp.
bool quantize_clamps(double raw, unsigned bits);

double decode(const FixedPointValue& v);

/// M x D grid of values sharing one precision. Row-major storage.
class QuantizedDataset {
 public:
  QuantizedDataset(std::size_t rows, std::size_t cols, unsigned bits,
                   std::vector<FixedPointValue> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  unsigned bits() const { return bits_; }
  /// Width of the index register, ceil(log2 M).
  unsigned index_bits() const { return index_bits_; }

  const FixedPointValue& at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  double value(std::size_t i, std::size_t j) const { return decode(at(i, j)); }

  std::vector<double> column(std::size_t j) const;

  /// Cells whose raw value was clamped at ingestion.
  std::size_t clamped_cells() const { return clamped_; }
  void set_clamped_cells(std::size_t n) { clamped_ = n; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  unsigned bits_;
  unsigned index_bits_;
  std::vector<FixedPointValue> values_;
  std::size_t clamped_ = 0;
};

/// ceil(log2 count); 0 for count <= 1.
unsigned ceil_log2(std::size_t count);

/// Quantizes a raw grid. Throws FormatError on ragged rows and DomainError
/// (naming the 0-based cell) on entries outside (-1, 1).
/// `min_rows` defaults to 2 because covariance divides by M - 1.
QuantizedDataset quantize_dataset(std::span<const std::vector<double>> raw,
                                  unsigned bits, std::size_t min_rows = 2);

}  // namespace qgad
