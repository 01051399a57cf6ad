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

#include <cstdint>
#include <vector>

#include "wavtok/audio.hpp"
#include "wavtok/layers.hpp"

namespace wavtok {

struct EncoderConfig {
  std::int64_t channels = 32;
  std::int64_t blocks = 4;
  std::int64_t latent_dim = 512;
  std::vector<std::int64_t> strides{2, 4, 5, 8};
  std::int64_t lstm_layers = 2;
  /// Hidden width of the recurrent layer; 0 selects latent_dim.
  std::int64_t lstm_hidden = 0;
  Activation activation = Activation::kElu;

  void validate() const;
  std::int64_t recurrent_width() const {
    return lstm_hidden > 0 ? lstm_hidden : latent_dim;
  }
  /// Channel width entering each block followed by the final width,
  /// e.g. 32, 64, 128, 256, 512 for C = 32, B = 4.
  std::vector<std::int64_t> channel_widths() const;
};

/// Product of the downsampling strides (samples per latent frame).
std::int64_t total_stride(const EncoderConfig& cfg);

/// Encoder output for one signal: frames is [T, D].
struct LatentSequence {
  torch::Tensor frames;
  double frame_rate = 0.0;

  std::int64_t num_frames() const { return frames.size(0); }
  std::int64_t dim() const { return frames.size(1); }
};

class ResidualUnitImpl : public torch::nn::Module {
 public:
  ResidualUnitImpl(std::int64_t channels, Activation act);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  Activation act_;
  torch::nn::Conv1d conv1_{nullptr}, conv2_{nullptr};
};
TORCH_MODULE(ResidualUnit);

/// One residual unit followed by a strided conv (kernel 2 * stride) that
/// doubles the channel count. Input length L becomes floor(L / stride).
class DownsampleBlockImpl : public torch::nn::Module {
 public:
  DownsampleBlockImpl(std::int64_t in_channels, std::int64_t stride,
                      Activation act);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  Activation act_;
  std::int64_t stride_;
  ResidualUnit residual_{nullptr};
  torch::nn::Conv1d down_{nullptr};
};
TORCH_MODULE(DownsampleBlock);

class EncoderImpl : public torch::nn::Module {
 public:
  explicit EncoderImpl(EncoderConfig cfg);

  /// x: [B, T] waveform  ->  [B, D, floor(T / total_stride)].
  torch::Tensor forward(const torch::Tensor& x);

  LatentSequence encode(const AudioBuffer& audio);

  const EncoderConfig& config() const { return cfg_; }

 private:
  EncoderConfig cfg_;
  torch::nn::Conv1d input_{nullptr};
  torch::nn::ModuleList blocks_;
  torch::nn::LSTM lstm_{nullptr};
  torch::nn::Conv1d output_{nullptr};
};
TORCH_MODULE(Encoder);

}  // namespace wavtok
