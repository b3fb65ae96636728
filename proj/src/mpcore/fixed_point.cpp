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

#include "ciphernet/mpcore/fixed_point.hpp"

#include <cmath>
#include <string>

#include "ciphernet/error.hpp"

namespace ciphernet::mpcore {

void FxpConfig::validate() const {
  Field f(modulus);
  if (frac_bits < 0) throw SpecError("frac_bits must be non-negative");
  if (2 * frac_bits >= f.bits())
    throw SpecError("frac_bits " + std::to_string(frac_bits) + " must be below half the field width " +
                    std::to_string(f.bits()));
  if (max_scale_exponent < frac_bits) throw SpecError("max_scale_exponent must be at least frac_bits");
}

std::uint64_t encode_at(double x, const Field& field, int scale_exp) {
  if (!std::isfinite(x)) throw OverflowError("cannot encode a non-finite value");
  const double scaled = std::ldexp(x, scale_exp);
  const double limit = static_cast<double>(field.modulus() / 2);
  if (std::fabs(scaled) >= limit)
    throw OverflowError("value " + std::to_string(x) + " exceeds the field range at scale 2^" + std::to_string(scale_exp));
  const auto r = static_cast<std::int64_t>(std::llround(scaled));
  return field.from_signed(r);
}

std::uint64_t encode(double x, const FxpConfig& cfg) {
  const Field field(cfg.modulus);
  const double limit = std::ldexp(static_cast<double>(cfg.modulus), -(cfg.frac_bits + 1));
  if (!(std::fabs(x) < limit)) throw OverflowError("|" + std::to_string(x) + "| >= p / 2^(f+1)");
  return encode_at(x, field, cfg.frac_bits);
}

double decode(std::uint64_t e, const Field& field, int scale_exp) {
  return std::ldexp(static_cast<double>(field.to_signed(field.reduce(e))), -scale_exp);
}

double decode(std::uint64_t e, const FxpConfig& cfg, int scale_exp) { return decode(e, Field(cfg.modulus), scale_exp); }

}  // namespace ciphernet::mpcore
