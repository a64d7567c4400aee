// Copyright 2026 The Simplex Population Learning Authors.
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

#ifndef SIMPLEX_PL_ERRORS_HPP_
#define SIMPLEX_PL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace simplex_pl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class IllegalActionError : public Error {
 public:
  using Error::Error;
};

class NotTerminalError : public Error {
 public:
  using Error::Error;
};

class SpecMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidMixtureError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ImpossibleEvidenceError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_ERRORS_HPP_
