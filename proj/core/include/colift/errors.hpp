// Copyright 2026 The Colift Authors
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

#ifndef COLIFT_ERRORS_HPP_
#define COLIFT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace colift {

/// Malformed or inconsistent model data (unknown frames, missing motor
/// bindings, bad topology).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Caller violated an API contract (dimension mismatch, unsolved input, ...).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

/// File or serialization failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One validation finding with a stable machine-readable code.
struct Diagnostic {
  std::string code;     // e.g. "E_TOPOLOGY_CYCLE"
  std::string message;  // human-readable detail
};

using DiagnosticList = std::vector<Diagnostic>;

}  // namespace colift

#endif  // COLIFT_ERRORS_HPP_
