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
#include "wavtok/dsp.hpp"
#include "wavtok/encoder.hpp"

namespace wavtok {

enum class DecoderVariant {
  kIstft,   // conv -> attention -> ConvNeXt stack -> iSTFT head
  kMirror,  // transposed-conv upsampler mirroring the encoder (ablation only)
};

struct DecoderConfig {
  std::int64_t latent_dim = 512;
  std::int64_t hidden_dim = 512;
  std::int64_t attn_heads = 8;
  bool use_attention = true;
  std::int64_t convnext_depth = 8;
  std::int64_t convnext_kernel = 7;
  std::int64_t convnext_expansion = 3;
  std::int64_t n_fft = 1280;
  std::int64_t hop = 320;
  double magnitude_ceiling = 1e2;
  DecoderVariant variant = DecoderVariant::kIstft;
  /// Mirror variant only: encoder width/strides to invert.
  std::int64_t mirror_channels = 32;
  std::vector<std::int64_t> mirror_strides{2, 4, 5, 8};

  void validate() const;
  std::int64_t head_channels() const { return n_fft + 2; }
  dsp::SpectralConfig head_spectral() const {
    return dsp::SpectralConfig::hann(n_fft, hop, dsp::Padding::kSame);
  }
};

/// Magnitude and phase predicted by the head, each [..., F, n_fft/2 + 1].
struct HeadOutput {
  torch::Tensor magnitude;
  torch::Tensor phase;
};

/// Pre-normalized multi-head self-attention with a residual connection.
/// Attention is full (non-causal) with no positional limit.
class AttentionBlockImpl : public torch::nn::Module {
 public:
  AttentionBlockImpl(std::int64_t dim, std::int64_t heads);

  /// h: [B, F, dim] -> [B, F, dim].
  torch::Tensor forward(const torch::Tensor& h);

  /// Softmax attention weights [B, heads, F, F].
  torch::Tensor attention_weights(const torch::Tensor& h);

  torch::nn::Linear value_projection() const { return value_; }
  torch::nn::Linear output_projection() const { return out_; }
  torch::nn::LayerNorm norm() const { return norm_; }

 private:
  std::tuple<torch::Tensor, torch::Tensor, torch::Tensor> project(
      const torch::Tensor& h);

  std::int64_t heads_;
  torch::nn::LayerNorm norm_{nullptr};
  torch::nn::Linear query_{nullptr}, key_{nullptr}, value_{nullptr},
      out_{nullptr};
};
TORCH_MODULE(AttentionBlock);

/// Depthwise conv -> LayerNorm -> pointwise expansion -> GELU -> pointwise
/// projection -> layer scale -> residual add.
class ConvNeXtBlockImpl : public torch::nn::Module {
 public:
  ConvNeXtBlockImpl(std::int64_t dim, std::int64_t kernel,
                    std::int64_t expansion, double layer_scale);

  /// h: [B, F, dim] -> [B, F, dim].
  torch::Tensor forward(const torch::Tensor& h);

  torch::nn::Linear projection() const { return pw2_; }

 private:
  torch::nn::Conv1d dwconv_{nullptr};
  torch::nn::LayerNorm norm_{nullptr};
  torch::nn::Linear pw1_{nullptr}, pw2_{nullptr};
  torch::Tensor gamma_;
};
TORCH_MODULE(ConvNeXtBlock);

/// Projects hidden frames to n_fft + 2 channels and synthesizes audio.
class IstftHeadImpl : public torch::nn::Module {
 public:
  IstftHeadImpl(std::int64_t hidden, std::int64_t n_fft, std::int64_t hop,
                double magnitude_ceiling);

  /// h: [B, F, hidden] -> audio [B, F * hop].
  torch::Tensor forward(const torch::Tensor& h);

  /// Splits pre-activations [..., F, n_fft + 2] into magnitude and phase.
  HeadOutput split(const torch::Tensor& pre) const;

  /// Pre-activations [..., F, n_fft + 2] -> audio [..., F * hop].
  torch::Tensor synthesize(const torch::Tensor& pre) const;

  torch::nn::Linear projection() const { return proj_; }
  std::int64_t channels() const { return n_fft_ + 2; }

 private:
  std::int64_t n_fft_, hop_;
  double ceiling_;
  dsp::SpectralConfig spectral_;
  torch::nn::Linear proj_{nullptr};
};
TORCH_MODULE(IstftHead);

class MirrorUpsamplerImpl : public torch::nn::Module {
 public:
  MirrorUpsamplerImpl(std::int64_t latent_dim, std::int64_t channels,
                      const std::vector<std::int64_t>& strides);

  /// zq: [B, D, F] -> audio [B, F * prod(strides)].
  torch::Tensor forward(const torch::Tensor& zq);

 private:
  std::vector<std::int64_t> strides_;
  torch::nn::Conv1d input_{nullptr};
  torch::nn::LSTM lstm_{nullptr};
  torch::nn::ModuleList ups_, residuals_;
  torch::nn::Conv1d output_{nullptr};
};
TORCH_MODULE(MirrorUpsampler);

class DecoderImpl : public torch::nn::Module {
 public:
  explicit DecoderImpl(DecoderConfig cfg);

  /// zq: [B, D, F] -> audio [B, F * hop].
  torch::Tensor forward(const torch::Tensor& zq);

  /// Backbone features before the head, [B, F, hidden].
  torch::Tensor backbone(const torch::Tensor& zq);

  /// zq: [F, D] quantized latents of one signal.
  AudioBuffer decode(const torch::Tensor& zq, int sample_rate);

  const DecoderConfig& config() const { return cfg_; }
  bool has_attention() const { return !attention_.is_empty(); }
  AttentionBlock attention() const { return attention_; }
  IstftHead head() const { return head_; }

 private:
  DecoderConfig cfg_;
  torch::nn::Conv1d input_{nullptr};
  AttentionBlock attention_{nullptr};
  torch::nn::LayerNorm norm_{nullptr};
  torch::nn::ModuleList blocks_;
  torch::nn::LayerNorm final_norm_{nullptr};
  IstftHead head_{nullptr};
  MirrorUpsampler mirror_{nullptr};
};
TORCH_MODULE(Decoder);

}  // namespace wavtok
