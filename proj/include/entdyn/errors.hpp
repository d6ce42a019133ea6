// Copyright 2026 The entdyn authors.
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

#ifndef ENTDYN_ERRORS_HPP
#define ENTDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace entdyn {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operator words whose terms change the total particle number by different
// amounts cannot be represented as a single sector-to-sector matrix.
class MixedParticleChange : public Error {
 public:
  using Error::Error;
};

class ModeOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidProbability : public Error {
 public:
  using Error::Error;
};

// A creation polynomial mapped the vacuum to the zero vector.
class EmptyState : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

// The supplied (alpha, c_j) cannot reproduce the occupation pattern of the
// coefficient table, or the table violates the class structure.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

// An evolved state acquired an eigenvalue below the hard floor; this signals
// an integration bug, not physics.
class PositivityViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// R_{k,l} is positive semidefinite by construction; a clearly negative
// eigenvalue means the block assembly is broken.
class NegativeEigenvalueInR : public Error {
 public:
  using Error::Error;
};

// Configuration-file validation failure. `pointer` is a JSON-pointer-style
// path to the offending field.
class ConfigInvalid : public Error {
 public:
  ConfigInvalid(const std::string& pointer, const std::string& message)
      : Error(pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

class TaskFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace entdyn

#endif  // ENTDYN_ERRORS_HPP
