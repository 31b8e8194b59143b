// Copyright the fidls contributors
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

namespace fidls {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based source line.
struct ParseError : Error {
  ParseError(const std::string& what, int line_no)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  int line;
};

/// Structurally valid input that violates a semantic constraint.
struct ValidationError : Error {
  using Error::Error;
};

/// Multi-qubit gate other than cx.
struct UnsupportedGateError : Error {
  using Error::Error;
};

/// Bad architecture graph (self-loop, disconnected, ...).
struct GraphError : Error {
  using Error::Error;
};

/// Not enough physical qubits for the requested operation.
struct CapacityError : Error {
  using Error::Error;
};

/// An API precondition was violated by the caller.
struct ContractViolation : Error {
  using Error::Error;
};

/// The routing loop exceeded its fallback budget.
struct NonTerminationError : Error {
  using Error::Error;
};

}  // namespace fidls
