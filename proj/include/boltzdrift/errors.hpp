// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOLTZDRIFT_ERRORS_HPP
#define BOLTZDRIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace boltzdrift {

/// Bad shapes, out-of-range parameters, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation is not available for this object (e.g. a target
/// without a reference sampler).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or a numerically degenerate computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (I + sigma^2 H) is too close to singular for the second-order estimator.
class SingularCurvature : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_ERRORS_HPP
