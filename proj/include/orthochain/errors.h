// Copyright 2026 The Orthochain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORTHOCHAIN_ERRORS_H_
#define ORTHOCHAIN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace orthochain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCoefficientError : public Error {
 public:
  using Error::Error;
};

class InvalidMeasureError : public Error {
 public:
  using Error::Error;
};

// A point or argument lies outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Internal invariant broken, e.g. two partial sums collapsed to one value.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace orthochain

#endif  // ORTHOCHAIN_ERRORS_H_
