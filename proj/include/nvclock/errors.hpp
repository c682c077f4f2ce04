// Copyright 2026 The nvclock Authors
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

namespace nvclock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (bad keys, invalid constants).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside the validity domain of a model.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// State labels cannot be assigned reliably because the field sits close to
/// a level anticrossing.
class NearAnticrossingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative numerical method failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace nvclock
