// Copyright 2026 The wavtok Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavtok/layers.hpp"

#include <cmath>

#include "wavtok/error.hpp"

namespace wavtok {

Activation parse_activation(const std::string& tag) {
  if (tag == "elu") return Activation::kElu;
  if (tag == "gelu") return Activation::kGelu;
  throw Error(ErrorCode::kConfig, "unknown activation '" + tag + "'");
}

std::string to_string(Activation act) {
  return act == Activation::kElu ? "elu" : "gelu";
}

torch::Tensor apply(Activation act, const torch::Tensor& x) {
  return act == Activation::kElu ? torch::elu(x) : torch::gelu(x);
}

void trunc_normal_(torch::Tensor w, double std) {
  torch::NoGradGuard no_grad;
  w.normal_(0.0, std);
  for (int round = 0; round < 64; ++round) {
    torch::Tensor outside = w.abs() > 2.0 * std;
    if (!outside.any().item<bool>()) return;
    w.masked_scatter_(outside,
                      torch::randn({outside.sum().item<std::int64_t>()},
                                   w.options()) *
                          std);
  }
  w.clamp_(-2.0 * std, 2.0 * std);
}

void init_fan_in_trunc_normal(torch::nn::Module& module) {
  torch::NoGradGuard no_grad;
  for (auto& item : module.named_parameters(/*recurse=*/true)) {
    const std::string& name = item.key();
    torch::Tensor p = item.value();
    const bool is_bias = name.size() >= 4 &&
                         name.compare(name.size() - 4, 4, "bias") == 0;
    if (is_bias) {
      p.zero_();
    } else if (p.dim() >= 2 && name.find("weight") != std::string::npos &&
               name.find("lstm") == std::string::npos) {
      const double fan_in = static_cast<double>(p.numel() / p.size(0));
      trunc_normal_(p, 1.0 / std::sqrt(fan_in));
    }
  }
}

WNConv2dImpl::WNConv2dImpl(const WNConv2dOptions& opts) : opts_(opts) {
  torch::Tensor v =
      torch::empty({opts.out, opts.in, opts.kernel[0], opts.kernel[1]});
  trunc_normal_(v, 1.0 / std::sqrt(static_cast<double>(
                         opts.in * opts.kernel[0] * opts.kernel[1])));
  torch::Tensor g = v.reshape({opts.out, -1}).norm(2, 1).reshape(
      {opts.out, 1, 1, 1});
  v_ = register_parameter("weight_v", v);
  g_ = register_parameter("weight_g", g.clone());
  bias_ = register_parameter("bias", torch::zeros({opts.out}));
}

torch::Tensor WNConv2dImpl::forward(const torch::Tensor& x) {
  torch::Tensor w = torch::_weight_norm(v_, g_, 0);
  return torch::conv2d(x, w, bias_, {opts_.stride[0], opts_.stride[1]},
                       {opts_.padding[0], opts_.padding[1]},
                       {opts_.dilation[0], opts_.dilation[1]});
}

}  // namespace wavtok
