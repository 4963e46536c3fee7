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

#include "qgad/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t col) {
  const std::string_view t = trim(cell);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": cannot parse '" << t
       << "' as a real number";
    throw FormatError(os.str());
  }
  return v;
}

}  // namespace

std::vector<std::vector<double>> read_csv(std::istream& in, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest = line;
    std::size_t col = 1;
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_cell(rest.substr(0, comma), line_no, col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "line " << line_no << ": " << row.size() << " columns, expected "
         << rows.front().size();
      throw FormatError(os.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv_file(const std::string& path,
                                               bool skip_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in, skip_header);
}

Ingested ingest(std::istream& in, unsigned bits, bool skip_header) {
  const auto raw = read_csv(in, skip_header);
  if (raw.empty()) throw FormatError("input holds no data rows");
  if (raw.size() < 2) {
    throw FormatError("input needs at least 2 data rows, got 1");
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = 0; j < raw[i].size(); ++j) {
      if (!(std::abs(raw[i][j]) < 1.0)) {
        std::ostringstream os;
        os << "row " << i + 1 << ", column " << j + 1 << ": value "
           << raw[i][j] << " outside the open interval (-1, 1)";
        throw DomainError(os.str());
      }
    }
  }
  QuantizedDataset ds = quantize_dataset(raw, bits);
  IngestionReport report{ds.rows(), ds.cols(), ds.bits(), ds.index_bits(),
                         ds.clamped_cells()};
  return Ingested{std::move(ds), report};
}

Ingested ingest_file(const std::string& path, unsigned bits,
                     bool skip_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return ingest(in, bits, skip_header);
}

}  // namespace qgad
