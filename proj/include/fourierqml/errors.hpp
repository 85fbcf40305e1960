// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception hierarchy shared by every module. The CLI maps each kind onto
 * a process exit code.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace fourierqml {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad argument value or mismatched dimensions.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Qubit or coordinate index outside the valid range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Input violates a structural invariant (e.g. a non-unitary matrix).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Request exceeds a configured size limit.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Real argument outside the mathematical domain of a function.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Valid input that the operation does not handle.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Optimizer hit a non-finite value.
class TrainingError : public Error {
  public:
    using Error::Error;
};

/// Malformed external file or document.
class ParseError : public Error {
  public:
    using Error::Error;
};

} // namespace fourierqml
