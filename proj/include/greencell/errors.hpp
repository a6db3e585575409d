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

#ifndef GREENCELL_ERRORS_HPP
#define GREENCELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace greencell {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (non-finite distance,
/// negative power, dimension mismatch, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// The instance admits no assignment satisfying all rate and bandwidth
/// constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The LP engine gave up (iteration cap, singular basis). Distinct from
/// infeasibility: the instance may well be solvable.
class SolverFailureError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive oracle refused an instance above its size limits.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Run-configuration file or CLI flags are inconsistent or out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace greencell

#endif  // GREENCELL_ERRORS_HPP
