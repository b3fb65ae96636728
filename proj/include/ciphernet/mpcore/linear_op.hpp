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
#include <span>
#include <vector>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/kernels/conv_kernels.hpp"
#include "ciphernet/mpcore/field.hpp"
#include "ciphernet/mpcore/sharing.hpp"

namespace ciphernet::mpcore {

/// A field-encoded linear map W (no bias). Convolutions keep their
/// geometry and run through the conv kernel; the map is still the im2col
/// matrix of shape out_size x in_size for binding purposes.
struct LinearOp {
  enum class Form { Conv, Matrix };

  int layer_id = 0;
  Form form = Form::Matrix;
  kernels::ConvGeom geom;  // Conv only
  std::size_t rows = 0;    // output elements
  std::size_t cols = 0;    // input elements
  std::vector<std::uint64_t> kernel;
  /// Scale exponent the weights add to their input.
  int weight_exp = 0;

  static LinearOp conv(int layer_id, const kernels::ConvGeom& g, std::vector<std::uint64_t> kernel, int weight_exp);
  static LinearOp matrix(int layer_id, std::size_t rows, std::size_t cols, std::vector<std::uint64_t> kernel,
                         int weight_exp);

  /// out = W x mod p.
  void apply(const Field& field, std::span<const std::uint64_t> x, std::span<std::uint64_t> out,
             kernels::Exec exec = kernels::Exec::Parallel) const;
  std::vector<std::uint64_t> apply(const Field& field, std::span<const std::uint64_t> x,
                                   kernels::Exec exec = kernels::Exec::Parallel) const;
  /// Multiply-accumulates one application performs.
  std::uint64_t macs() const;
  std::uint64_t digest() const;
};

/// Identity of the (W, r) pair a triple was generated for. A mismatch at
/// online time means the offline and online phases disagree.
struct TripleBinding {
  int layer_id = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t weight_digest = 0;

  bool operator==(const TripleBinding&) const = default;
};

TripleBinding binding_of(const LinearOp& op);

/// Server half of a Beaver triple: u = W r - v.
struct TripleServer {
  TripleBinding binding;
  std::vector<std::uint64_t> u;
};

/// Client half: v, which is also the client's share of the layer output.
struct TripleClient {
  TripleBinding binding;
  std::vector<std::uint64_t> v;
};

/// Dealer: v uniform, u = W r - v. `r` is the client's share of the
/// layer input.
std::pair<TripleServer, TripleClient> dealer_triples(const Field& field, const LinearOp& op,
                                                     std::span<const std::uint64_t> r, crypto::Prg& rng);

/// Server online step: q^S = W x^S + u + b. Throws DesyncError when the
/// triple was bound to a different layer, shape or weight set.
Share linear_online(const Field& field, const LinearOp& op, std::span<const std::uint64_t> bias,
                    const Share& x_server, const TripleServer& triple,
                    kernels::Exec exec = kernels::Exec::Parallel);

/// Broadcasts a per-channel bias over an HWC output of `rows` elements.
std::vector<std::uint64_t> expand_bias(std::span<const std::uint64_t> bias, std::size_t rows);

}  // namespace ciphernet::mpcore
