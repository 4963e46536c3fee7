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
#include <istream>
#include <string>
#include <vector>

#include "qgad/errors.hpp"
#include "qgad/fixedpoint.hpp"

namespace qgad {

/// Comma-separated decimal reals, LF or CRLF, blank lines ignored.
/// Throws FormatError naming line and column for unparsable cells and
/// ragged rows.
std::vector<std::vector<double>> read_csv(std::istream& in,
                                          bool skip_header = false);
std::vector<std::vector<double>> read_csv_file(const std::string& path,
                                               bool skip_header = false);

struct IngestionReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  unsigned bits = 0;
  unsigned index_bits = 0;
  std::size_t clamped_cells = 0;
};

struct Ingested {
  QuantizedDataset dataset;
  IngestionReport report;
};

/// Parses and quantizes. Throws FormatError for empty input or M < 2 and
/// DomainError naming the 1-based row and column of a cell outside (-1, 1).
Ingested ingest(std::istream& in, unsigned bits, bool skip_header = false);
Ingested ingest_file(const std::string& path, unsigned bits,
                     bool skip_header = false);

}  // namespace qgad
