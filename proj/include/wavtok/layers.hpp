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

#pragma once

#include <torch/torch.h>

#include <array>
#include <cstdint>
#include <string>

namespace wavtok {

enum class Activation { kElu, kGelu };

Activation parse_activation(const std::string& tag);
std::string to_string(Activation act);
torch::Tensor apply(Activation act, const torch::Tensor& x);

/// Fills `w` from N(0, std^2) truncated to +-2 std (resampling outliers).
void trunc_normal_(torch::Tensor w, double std);

/// Truncated-normal init scaled by 1/sqrt(fan_in) for every conv/linear
/// weight reachable from `module`; biases are zeroed.
void init_fan_in_trunc_normal(torch::nn::Module& module);

/// Weight-normalized 2D convolution: weight = g * v / ||v|| per out channel.
struct WNConv2dOptions {
  std::int64_t in = 1, out = 1;
  std::array<std::int64_t, 2> kernel{1, 1};
  std::array<std::int64_t, 2> stride{1, 1};
  std::array<std::int64_t, 2> padding{0, 0};
  std::array<std::int64_t, 2> dilation{1, 1};
};

class WNConv2dImpl : public torch::nn::Module {
 public:
  explicit WNConv2dImpl(const WNConv2dOptions& opts);
  torch::Tensor forward(const torch::Tensor& x);

  const WNConv2dOptions& options() const { return opts_; }

 private:
  WNConv2dOptions opts_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(WNConv2d);

}  // namespace wavtok
