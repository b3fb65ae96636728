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

#include <cstdint>

#include "ciphernet/mpcore/field.hpp"

namespace ciphernet::mpcore {

/// Fixed-point encoding parameters. A real x is stored as round(x * 2^f) mod p;
/// products of two encodings carry scale exponent 2f until a ReLU gadget
/// truncates back to f.
struct FxpConfig {
  int frac_bits = 8;
  std::uint64_t modulus = (1ull << 31) - 1;
  /// Largest scale exponent the range analysis will accept.
  int max_scale_exponent = 28;

  Field field() const { return Field(modulus); }
  /// Throws SpecError unless 2f < bits(p) and the exponent cap is at least f.
  void validate() const;
};

/// round(x * 2^f) mod p; throws OverflowError if |x| >= p / 2^(f+1).
std::uint64_t encode(double x, const FxpConfig& cfg);
/// Encodes at an arbitrary scale exponent.
std::uint64_t encode_at(double x, const Field& field, int scale_exp);
/// signed(e) / 2^scale_exp.
double decode(std::uint64_t e, const FxpConfig& cfg, int scale_exp);
double decode(std::uint64_t e, const Field& field, int scale_exp);

}  // namespace ciphernet::mpcore
