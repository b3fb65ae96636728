// Copyright 2026 The ciphernet Authors
// SPDX-License-Identifier: Apache-2.0
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

namespace ciphernet {

/// Base of every error the library raises. `kind()` is a stable
/// machine-readable tag used by the CLI's JSON error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed spec, weights, plan or configuration supplied by the user.
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error("spec", what) {}
  SpecError(int node_id, const std::string& what)
      : Error("spec", "node " + std::to_string(node_id) + ": " + what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

/// Fixed-point magnitude would leave the signed field range.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error("budget", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

/// Online protocol failures: transport, desync, exhausted offline material,
/// binding mismatches. The CLI exits with code 2 for these.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error("protocol", what) {}
  ProtocolError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

class DesyncError : public ProtocolError {
 public:
  explicit DesyncError(const std::string& what) : ProtocolError("desync", what) {}
};

class ExhaustedError : public ProtocolError {
 public:
  explicit ExhaustedError(const std::string& what) : ProtocolError("exhausted", what) {}
};

}  // namespace ciphernet
