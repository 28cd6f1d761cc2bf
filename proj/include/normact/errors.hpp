// Copyright 2026 The normact Authors
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

namespace normact {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix is not square, empty, or holds NaN/Inf.
class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

/// Smallest singular value is below the conditioning floor.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement budget exhausted.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Evaluation time outside [0, T].
class OutOfRange : public Error {
 public:
  using Error::Error;
};

class NotDetNormalized : public Error {
 public:
  using Error::Error;
};

class SingularPropagator : public Error {
 public:
  using Error::Error;
};

/// Scenario or spec parameters violate their preconditions.
class BadParam : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace normact
