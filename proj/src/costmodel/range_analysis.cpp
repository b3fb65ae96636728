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

#include "ciphernet/costmodel/range_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/infer.hpp"

namespace ciphernet::costmodel {

using netgraph::LayerKind;

namespace {

[[noreturn]] void overflow(int id, const std::string& what, double bound, double limit) {
  std::ostringstream os;
  os << "node " << id << ": " << what << " bound " << bound << " reaches p/4 = " << limit;
  throw OverflowError(os.str());
}

}  // namespace

RangeReport analyze_range(const netgraph::NetworkSpec& spec, const netgraph::Weights& weights,
                          const mpcore::FxpConfig& cfg, double input_bound) {
  cfg.validate();
  if (!(input_bound >= 0.0)) throw SpecError("input bound must be non-negative");
  netgraph::check_weights(spec, weights);
  const mpcore::Field field = cfg.field();
  const netgraph::ScalePlan plan = netgraph::plan_scales(spec, cfg.frac_bits);
  const netgraph::QuantizedWeights qw = netgraph::quantize_weights(spec, weights, plan, field);

  RangeReport rep;
  rep.limit = static_cast<double>(field.modulus()) / 4.0;
  // Rounding is monotone, so |round(x 2^e)| <= ceil(B 2^e) whenever |x| <= B.
  const double in_value = std::ceil(std::ldexp(input_bound, plan.input_exp));
  if (in_value >= rep.limit) overflow(netgraph::kNetworkInput, "input", in_value, rep.limit);

  const auto& nodes = spec.nodes();
  std::vector<double> bound(nodes.size(), 0.0);
  auto out_of = [&](int id) {
    return id == netgraph::kNetworkInput ? in_value : bound[spec.index_of(id)];
  };
  auto exp_of = [&](int id) {
    return id == netgraph::kNetworkInput ? plan.input_exp : plan.out_exp[spec.index_of(id)];
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    NodeRange r;
    r.id = n.id;
    r.in_exp = plan.in_exp[i];
    r.out_exp = plan.out_exp[i];
    if (r.out_exp > cfg.max_scale_exponent || r.in_exp > cfg.max_scale_exponent)
      throw OverflowError("node " + std::to_string(n.id) + ": scale exponent " +
                          std::to_string(std::max(r.in_exp, r.out_exp)) + " exceeds the cap " +
                          std::to_string(cfg.max_scale_exponent));
    // Concatenated inputs are aligned up to in_exp by exact multiplication.
    double in_b = 0.0;
    for (int in : n.inputs) in_b = std::max(in_b, std::ldexp(out_of(in), r.in_exp - exp_of(in)));
    if (in_b >= rep.limit) overflow(n.id, "aligned input", in_b, rep.limit);
    r.in_bound = in_b;

    double out_b = 0.0;
    switch (n.kind) {
      case LayerKind::Conv:
      case LayerKind::ConcatReshape:
      case LayerKind::Dense: {
        const auto& q = qw.at(n.id);
        const int rows = spec.shape_of(n.id).channels;
        const std::size_t row_len = q.kernel.size() / static_cast<std::size_t>(rows);
        for (int o = 0; o < rows; ++o) {
          double l1 = 0.0;
          for (std::size_t k = 0; k < row_len; ++k)
            l1 += std::fabs(static_cast<double>(field.to_signed(q.kernel[static_cast<std::size_t>(o) * row_len + k])));
          const double b = q.bias.empty() ? 0.0 : std::fabs(static_cast<double>(field.to_signed(q.bias[static_cast<std::size_t>(o)])));
          out_b = std::max(out_b, l1 * in_b + b);
        }
        break;
      }
      case LayerKind::Pool:
        out_b = in_b * static_cast<double>(n.filter) * n.filter;
        break;
      case LayerKind::Relu:
        out_b = std::ldexp(in_b, -plan.shift[i]) + 1.0;
        break;
    }
    if (out_b >= rep.limit) overflow(n.id, "output", out_b, rep.limit);
    r.out_bound = out_b;
    bound[i] = out_b;
    rep.max_scale_exp = std::max({rep.max_scale_exp, r.in_exp, r.out_exp});
    rep.max_bound = std::max({rep.max_bound, in_b, out_b});
    rep.nodes.push_back(r);
  }
  return rep;
}

}  // namespace ciphernet::costmodel
