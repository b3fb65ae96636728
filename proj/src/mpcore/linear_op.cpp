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

#include "ciphernet/mpcore/linear_op.hpp"

#include "ciphernet/error.hpp"
#include "ciphernet/kernels/field_kernels.hpp"

namespace ciphernet::mpcore {

LinearOp LinearOp::conv(int layer_id, const kernels::ConvGeom& g, std::vector<std::uint64_t> kernel, int weight_exp) {
  if (kernel.size() != g.kernel_size()) throw ShapeError("conv kernel size mismatch for layer " + std::to_string(layer_id));
  LinearOp op;
  op.layer_id = layer_id;
  op.form = Form::Conv;
  op.geom = g;
  op.rows = g.out_size();
  op.cols = g.in_size();
  op.kernel = std::move(kernel);
  op.weight_exp = weight_exp;
  return op;
}

LinearOp LinearOp::matrix(int layer_id, std::size_t rows, std::size_t cols, std::vector<std::uint64_t> kernel,
                          int weight_exp) {
  if (kernel.size() != rows * cols) throw ShapeError("matrix size mismatch for layer " + std::to_string(layer_id));
  LinearOp op;
  op.layer_id = layer_id;
  op.form = Form::Matrix;
  op.rows = rows;
  op.cols = cols;
  op.kernel = std::move(kernel);
  op.weight_exp = weight_exp;
  return op;
}

void LinearOp::apply(const Field& field, std::span<const std::uint64_t> x, std::span<std::uint64_t> out,
                     kernels::Exec exec) const {
  if (x.size() != cols || out.size() != rows)
    throw ShapeError("layer " + std::to_string(layer_id) + ": linear input has " + std::to_string(x.size()) +
                     " elements, expected " + std::to_string(cols));
  if (form == Form::Conv)
    kernels::conv2d_field(field, geom, x, kernel, out, exec);
  else
    kernels::matvec_field(field, rows, cols, kernel, x, out, exec);
}

std::vector<std::uint64_t> LinearOp::apply(const Field& field, std::span<const std::uint64_t> x,
                                           kernels::Exec exec) const {
  std::vector<std::uint64_t> out(rows);
  apply(field, x, out, exec);
  return out;
}

std::uint64_t LinearOp::macs() const {
  if (form == Form::Matrix) return static_cast<std::uint64_t>(rows) * cols;
  return static_cast<std::uint64_t>(rows) * geom.filter * geom.filter * geom.in_channels;
}

std::uint64_t LinearOp::digest() const {
  std::uint64_t h = crypto::fnv1a64(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(kernel.data()), kernel.size() * sizeof(std::uint64_t)));
  const std::uint64_t shape[6] = {rows, cols, static_cast<std::uint64_t>(form), static_cast<std::uint64_t>(geom.filter),
                                  static_cast<std::uint64_t>(geom.stride), static_cast<std::uint64_t>(geom.in_channels)};
  return crypto::fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(shape), sizeof(shape)), h);
}

TripleBinding binding_of(const LinearOp& op) { return {op.layer_id, op.rows, op.cols, op.digest()}; }

std::pair<TripleServer, TripleClient> dealer_triples(const Field& field, const LinearOp& op,
                                                     std::span<const std::uint64_t> r, crypto::Prg& rng) {
  auto wr = op.apply(field, r);
  TripleClient c{binding_of(op), random_vector(field, op.rows, rng)};
  TripleServer s{c.binding, sub(field, wr, c.v)};
  return {std::move(s), std::move(c)};
}

std::vector<std::uint64_t> expand_bias(std::span<const std::uint64_t> bias, std::size_t rows) {
  std::vector<std::uint64_t> out(rows);
  if (bias.empty()) return out;
  if (rows % bias.size() != 0) throw ShapeError("bias length does not divide the output size");
  for (std::size_t i = 0; i < rows; ++i) out[i] = bias[i % bias.size()];
  return out;
}

Share linear_online(const Field& field, const LinearOp& op, std::span<const std::uint64_t> bias,
                    const Share& x_server, const TripleServer& triple, kernels::Exec exec) {
  if (!(triple.binding == binding_of(op)))
    throw DesyncError("layer " + std::to_string(op.layer_id) + ": triple bound to layer " +
                      std::to_string(triple.binding.layer_id) + " (" + std::to_string(triple.binding.rows) + "x" +
                      std::to_string(triple.binding.cols) + ") does not match the weights");
  if (x_server.modulus != field.modulus()) throw ShapeError("modulus mismatch");
  Share q{Party::Server, op.apply(field, x_server.values, exec), x_server.scale_exp + op.weight_exp, field.modulus()};
  add_into(field, q.values, triple.u);
  if (!bias.empty()) {
    const std::size_t c = bias.size();
    if (q.values.size() % c != 0) throw ShapeError("bias length does not divide the output size");
    for (std::size_t i = 0; i < q.values.size(); ++i) q.values[i] = field.add(q.values[i], bias[i % c]);
  }
  return q;
}

}  // namespace ciphernet::mpcore
