// Copyright 2026 The dualsim Authors
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

namespace dualsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value: out-of-range index, unknown label, empty input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two operands live on different composite layouts.
class LayoutMismatch : public Error {
 public:
  using Error::Error;
};

/// A generator or observable that must be Hermitian is not.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Composite dimension exceeds the configured dense-storage cap.
class DimensionCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A state or operator violates a numerical invariant (trace, Hermiticity,
/// positivity, normalization).
class InvariantBreach : public Error {
 public:
  using Error::Error;
};

/// An operation was called on a state it is not defined for, such as
/// perceiving before the measurement has completed.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace dualsim
