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

#include "ciphernet/netgraph/infer.hpp"

#include <algorithm>
#include <cmath>

#include "ciphernet/error.hpp"

namespace ciphernet::netgraph {

using mpcore::i128;

TensorF::TensorF(Shape s, std::vector<float> v) : shape(s), values(std::move(v)) {
  if (values.size() != shape.elements())
    throw ShapeError("tensor of shape " + std::to_string(s.height) + "x" + std::to_string(s.height) + "x" +
                     std::to_string(s.channels) + " given " + std::to_string(values.size()) + " values");
}

namespace {

int log2_exact(int x) {
  int k = 0;
  while ((1 << k) < x) ++k;
  return k;
}

/// Channel-wise concatenation of same-resolution HWC buffers.
template <typename T>
std::vector<T> concat_channels(const std::vector<const std::vector<T>*>& parts, const std::vector<int>& channels,
                               int height) {
  int total = 0;
  for (int c : channels) total += c;
  const std::size_t pixels = static_cast<std::size_t>(height) * height;
  std::vector<T> out(pixels * total);
  for (std::size_t px = 0; px < pixels; ++px) {
    std::size_t o = px * total;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto c = static_cast<std::size_t>(channels[k]);
      std::copy_n(parts[k]->data() + px * c, c, out.data() + o);
      o += c;
    }
  }
  return out;
}

kernels::ConvGeom conv_geom(const NetworkSpec& spec, const LayerNode& n) {
  kernels::ConvGeom g;
  g.height = spec.input_height(n.id);
  g.in_channels = spec.input_channels(n.id);
  g.out_channels = n.out_channels;
  g.filter = n.kind == LayerKind::Conv ? n.filter : 1;
  g.stride = n.kind == LayerKind::Conv ? n.stride : 1;
  return g;
}

}  // namespace

TensorF infer_plaintext(const NetworkSpec& spec, const TensorF& input, const Weights& weights, kernels::Exec exec) {
  if (input.shape != spec.input_shape()) throw ShapeError("input shape does not match the network input");
  check_weights(spec, weights);
  std::vector<std::vector<float>> act(spec.nodes().size());
  auto value_of = [&](int id) -> const std::vector<float>& {
    return id == kNetworkInput ? input.values : act[spec.index_of(id)];
  };
  for (std::size_t i = 0; i < spec.nodes().size(); ++i) {
    const LayerNode& n = spec.nodes()[i];
    const Shape out = spec.shape_of(n.id);
    std::vector<float> x;
    if (n.inputs.size() == 1) {
      x = value_of(n.inputs.front());
    } else {
      std::vector<const std::vector<float>*> parts;
      std::vector<int> ch;
      for (int in : n.inputs) {
        parts.push_back(&value_of(in));
        ch.push_back(spec.shape_of(in).channels);
      }
      x = concat_channels(parts, ch, spec.input_height(n.id));
    }
    std::vector<float> y(out.elements());
    switch (n.kind) {
      case LayerKind::Conv:
      case LayerKind::ConcatReshape: {
        const auto& w = weights.at(n.id);
        kernels::conv2d(conv_geom(spec, n), x, w.kernel, w.bias, y, exec);
        break;
      }
      case LayerKind::Dense: {
        const auto& w = weights.at(n.id);
        kernels::matvec(y.size(), x.size(), w.kernel, x, w.bias, y, exec);
        break;
      }
      case LayerKind::Pool:
        kernels::avg_pool(spec.input_height(n.id), out.channels, n.filter, n.stride, x, y);
        break;
      case LayerKind::Relu:
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = std::max(0.0f, x[k]);
        break;
    }
    act[i] = std::move(y);
  }
  return TensorF(spec.output_shape(), std::move(act.back()));
}

ScalePlan plan_scales(const NetworkSpec& spec, int frac_bits) {
  ScalePlan plan;
  plan.frac_bits = frac_bits;
  plan.input_exp = frac_bits;
  const std::size_t n = spec.nodes().size();
  plan.in_exp.assign(n, 0);
  plan.out_exp.assign(n, 0);
  plan.shift.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const LayerNode& node = spec.nodes()[i];
    int e = 0;
    for (int in : node.inputs) e = std::max(e, in == kNetworkInput ? plan.input_exp : plan.out_exp[spec.index_of(in)]);
    plan.in_exp[i] = e;
    switch (node.kind) {
      case LayerKind::Conv:
      case LayerKind::ConcatReshape:
      case LayerKind::Dense: plan.out_exp[i] = e + frac_bits; break;
      case LayerKind::Pool: plan.out_exp[i] = e + 2 * log2_exact(node.filter); break;
      case LayerKind::Relu:
        plan.shift[i] = std::max(0, e - frac_bits);
        plan.out_exp[i] = e - plan.shift[i];
        break;
    }
  }
  return plan;
}

namespace {

std::uint64_t quantize_value(const mpcore::Field& field, float v, int exp, int layer_id) {
  const double scaled = std::ldexp(static_cast<double>(v), exp);
  if (!std::isfinite(scaled) || std::fabs(scaled) >= static_cast<double>(field.modulus() / 2))
    throw OverflowError("layer " + std::to_string(layer_id) + ": weight " + std::to_string(v) +
                        " does not fit the field at scale 2^" + std::to_string(exp));
  return field.from_signed(static_cast<std::int64_t>(std::llround(scaled)));
}

}  // namespace

QuantizedWeights quantize_weights(const NetworkSpec& spec, const Weights& weights, const ScalePlan& plan,
                                  const mpcore::Field& field) {
  check_weights(spec, weights);
  QuantizedWeights q;
  for (std::size_t i = 0; i < spec.nodes().size(); ++i) {
    const LayerNode& n = spec.nodes()[i];
    if (!n.has_weights()) continue;
    const auto& w = weights.at(n.id);
    QuantizedLayer l;
    l.kernel.reserve(w.kernel.size());
    for (float v : w.kernel) l.kernel.push_back(quantize_value(field, v, plan.frac_bits, n.id));
    for (float v : w.bias) l.bias.push_back(quantize_value(field, v, plan.out_exp[i], n.id));
    q.emplace(n.id, std::move(l));
  }
  return q;
}

TensorQ encode_tensor(const TensorF& t, const mpcore::FxpConfig& cfg) {
  TensorQ q(t.shape, cfg.frac_bits, cfg.modulus);
  for (std::size_t i = 0; i < t.values.size(); ++i) q.values[i] = mpcore::encode(t.values[i], cfg);
  return q;
}

TensorF decode_tensor(const TensorQ& t) {
  const mpcore::Field f(t.modulus);
  TensorF out(t.shape);
  for (std::size_t i = 0; i < t.values.size(); ++i)
    out.values[i] = static_cast<float>(mpcore::decode(t.values[i], f, t.scale_exp));
  return out;
}

TensorQ infer_fixed(const NetworkSpec& spec, const TensorQ& input, const Weights& weights,
                    const mpcore::FxpConfig& cfg) {
  cfg.validate();
  const mpcore::Field field(cfg.modulus);
  if (input.shape != spec.input_shape()) throw ShapeError("input shape does not match the network input");
  if (input.modulus != cfg.modulus) throw ShapeError("modulus mismatch between input and configuration");
  if (input.scale_exp != cfg.frac_bits) throw ShapeError("input must be encoded at 2^frac_bits");
  const ScalePlan plan = plan_scales(spec, cfg.frac_bits);
  const QuantizedWeights qw = quantize_weights(spec, weights, plan, field);
  const i128 half = static_cast<i128>(cfg.modulus / 2);

  std::vector<i128> in_vals(input.values.size());
  for (std::size_t i = 0; i < in_vals.size(); ++i) in_vals[i] = field.to_signed(input.values[i] % cfg.modulus);

  std::vector<std::vector<i128>> act(spec.nodes().size());
  auto value_of = [&](int id) -> const std::vector<i128>& {
    return id == kNetworkInput ? in_vals : act[spec.index_of(id)];
  };
  auto exp_of = [&](int id) { return id == kNetworkInput ? plan.input_exp : plan.out_exp[spec.index_of(id)]; };
  auto signed_w = [&](std::uint64_t v) { return static_cast<i128>(field.to_signed(v)); };

  for (std::size_t i = 0; i < spec.nodes().size(); ++i) {
    const LayerNode& n = spec.nodes()[i];
    const int h = spec.input_height(n.id);
    const Shape out = spec.shape_of(n.id);

    // Aligned, concatenated input.
    std::vector<std::vector<i128>> aligned;
    std::vector<const std::vector<i128>*> parts;
    std::vector<int> ch;
    aligned.reserve(n.inputs.size());
    for (int in : n.inputs) {
      const int d = plan.in_exp[i] - exp_of(in);
      if (d == 0) {
        parts.push_back(&value_of(in));
      } else {
        aligned.push_back(value_of(in));
        for (auto& v : aligned.back()) v *= static_cast<i128>(1) << d;
        parts.push_back(&aligned.back());
      }
      ch.push_back(spec.shape_of(in).channels);
    }
    std::vector<i128> x = parts.size() == 1 ? *parts.front() : concat_channels(parts, ch, h);
    const int cin = spec.input_channels(n.id);
    for (const i128 v : x)
      if (v >= half || -v >= half)
        throw OverflowError("layer " + std::to_string(n.id) + ": aligned input leaves the signed field range");

    std::vector<i128> y(out.elements(), 0);
    switch (n.kind) {
      case LayerKind::Conv:
      case LayerKind::ConcatReshape: {
        const auto& w = qw.at(n.id);
        const kernels::ConvGeom g = conv_geom(spec, n);
        const int ho = g.out_height();
        const int pad = g.filter / 2;
        for (int oy = 0; oy < ho; ++oy)
          for (int ox = 0; ox < ho; ++ox)
            for (int co = 0; co < g.out_channels; ++co) {
              i128 acc = signed_w(w.bias[co]);
              for (int dy = 0; dy < g.filter; ++dy)
                for (int dx = 0; dx < g.filter; ++dx) {
                  const int iy = oy * g.stride + dy - pad;
                  const int ix = ox * g.stride + dx - pad;
                  if (iy < 0 || ix < 0 || iy >= h || ix >= h) continue;
                  for (int ci = 0; ci < cin; ++ci)
                    acc += signed_w(w.kernel[((static_cast<std::size_t>(co) * g.filter + dy) * g.filter + dx) * cin + ci]) *
                           x[(static_cast<std::size_t>(iy) * h + ix) * cin + ci];
                }
              y[(static_cast<std::size_t>(oy) * ho + ox) * g.out_channels + co] = acc;
            }
        break;
      }
      case LayerKind::Dense: {
        const auto& w = qw.at(n.id);
        for (std::size_t o = 0; o < y.size(); ++o) {
          i128 acc = signed_w(w.bias[o]);
          for (std::size_t k = 0; k < x.size(); ++k) acc += signed_w(w.kernel[o * x.size() + k]) * x[k];
          y[o] = acc;
        }
        break;
      }
      case LayerKind::Pool: {
        const int ho = out.height;
        for (int oy = 0; oy < ho; ++oy)
          for (int ox = 0; ox < ho; ++ox)
            for (int c = 0; c < cin; ++c) {
              i128 s = 0;
              for (int dy = 0; dy < n.filter; ++dy)
                for (int dx = 0; dx < n.filter; ++dx)
                  s += x[(static_cast<std::size_t>(oy * n.stride + dy) * h + (ox * n.stride + dx)) * cin + c];
              y[(static_cast<std::size_t>(oy) * ho + ox) * cin + c] = s;
            }
        break;
      }
      case LayerKind::Relu:
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] > 0 ? (x[k] >> plan.shift[i]) : 0;
        break;
    }
    for (const i128 v : y)
      if (v >= half || -v >= half)
        throw OverflowError("layer " + std::to_string(n.id) + ": fixed-point value leaves the signed field range");
    act[i] = std::move(y);
  }

  TensorQ result(spec.output_shape(), plan.out_exp.back(), cfg.modulus);
  const auto& last = act.back();
  for (std::size_t k = 0; k < last.size(); ++k) result.values[k] = field.from_signed(last[k]);
  return result;
}

}  // namespace ciphernet::netgraph
