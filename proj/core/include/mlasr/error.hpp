// Copyright 2026 The mlasr Authors.
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

namespace mlasr {

// Base of every error raised by the library. Subclasses let the CLI map
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (manifest lines, vocab files, ARPA, WAV headers).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a precondition or invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Audio stream in a format the reader does not handle.
class UnsupportedFormat : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace mlasr
