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

#include <stdexcept>
#include <string>

namespace qgad {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input (ragged rows, unparsable cells, empty files).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The requested simulation exceeds the configured qubit cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Register widths or positions do not fit the operation.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// An oracle was queried on an index that is not in the dataset.
class DataAccessError : public Error {
 public:
  using Error::Error;
};

/// The requested measurement outcome has (numerically) zero probability.
class PostselectionError : public Error {
 public:
  using Error::Error;
};

/// A sign test was requested for a zero amplitude floor.
class UnboundedShotsError : public Error {
 public:
  using Error::Error;
};

/// Gate-level construction requested for an unsupported register width.
class UnsupportedWidthError : public Error {
 public:
  using Error::Error;
};

/// The covariance matrix is not positive definite.
class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

/// The perturbation proviso of the density error bound is violated.
class BoundInvalidError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid command-line or configuration input.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgad
