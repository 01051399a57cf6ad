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

#include "wavtok/decoder.hpp"

#include <cmath>
#include <string>

#include "wavtok/error.hpp"

namespace wavtok {

namespace F = torch::nn::functional;

void DecoderConfig::validate() const {
  check(latent_dim > 0 && hidden_dim > 0, ErrorCode::kConfig,
        "decoder widths must be positive");
  check(convnext_depth >= 0 && convnext_kernel > 0 && convnext_kernel % 2 == 1,
        ErrorCode::kConfig, "convnext kernel must be odd and positive");
  check(convnext_expansion > 0, ErrorCode::kConfig,
        "convnext expansion must be positive");
  check(magnitude_ceiling > 0.0, ErrorCode::kConfig,
        "magnitude ceiling must be positive");
  if (use_attention) {
    check(attn_heads > 0 && hidden_dim % attn_heads == 0, ErrorCode::kConfig,
          "hidden_dim must be divisible by attn_heads");
  }
  if (variant == DecoderVariant::kIstft) {
    head_spectral().validate();
  } else {
    check(!mirror_strides.empty() && mirror_channels > 0, ErrorCode::kConfig,
          "mirror decoder needs strides and channels");
    std::int64_t product = 1;
    for (auto s : mirror_strides) product *= s;
    check(product == hop, ErrorCode::kConfig,
          "mirror strides must multiply to the hop");
  }
}

AttentionBlockImpl::AttentionBlockImpl(std::int64_t dim, std::int64_t heads)
    : heads_(heads) {
  norm_ = register_module(
      "norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
  query_ = register_module("query", torch::nn::Linear(dim, dim));
  key_ = register_module("key", torch::nn::Linear(dim, dim));
  value_ = register_module("value", torch::nn::Linear(dim, dim));
  out_ = register_module("out", torch::nn::Linear(dim, dim));
}

std::tuple<torch::Tensor, torch::Tensor, torch::Tensor>
AttentionBlockImpl::project(const torch::Tensor& h) {
  const auto b = h.size(0), f = h.size(1), dim = h.size(2);
  torch::Tensor x = norm_(h);
  auto split = [&](const torch::Tensor& t) {
    return t.reshape({b, f, heads_, dim / heads_}).transpose(1, 2);
  };
  return {split(query_(x)), split(key_(x)), split(value_(x))};
}

torch::Tensor AttentionBlockImpl::attention_weights(const torch::Tensor& h) {
  auto [q, k, v] = project(h);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.size(-1)));
  return torch::softmax(torch::matmul(q, k.transpose(-1, -2)) * scale, -1);
}

torch::Tensor AttentionBlockImpl::forward(const torch::Tensor& h) {
  check(h.dim() == 3 && h.size(1) >= 1, ErrorCode::kShape,
        "attention expects [B, F >= 1, dim]");
  auto [q, k, v] = project(h);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.size(-1)));
  torch::Tensor w =
      torch::softmax(torch::matmul(q, k.transpose(-1, -2)) * scale, -1);
  torch::Tensor ctx =
      torch::matmul(w, v).transpose(1, 2).reshape(h.sizes());
  return h + out_(ctx);
}

ConvNeXtBlockImpl::ConvNeXtBlockImpl(std::int64_t dim, std::int64_t kernel,
                                     std::int64_t expansion,
                                     double layer_scale) {
  dwconv_ = register_module(
      "dwconv", torch::nn::Conv1d(torch::nn::Conv1dOptions(dim, dim, kernel)
                                      .padding(kernel / 2)
                                      .groups(dim)));
  norm_ = register_module(
      "norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
  pw1_ = register_module("pw1", torch::nn::Linear(dim, expansion * dim));
  pw2_ = register_module("pw2", torch::nn::Linear(expansion * dim, dim));
  gamma_ = register_parameter("gamma", torch::full({dim}, layer_scale));
}

torch::Tensor ConvNeXtBlockImpl::forward(const torch::Tensor& h) {
  torch::Tensor x = dwconv_(h.transpose(1, 2)).transpose(1, 2);
  x = pw2_(torch::gelu(pw1_(norm_(x))));
  return h + gamma_ * x;
}

IstftHeadImpl::IstftHeadImpl(std::int64_t hidden, std::int64_t n_fft,
                             std::int64_t hop, double magnitude_ceiling)
    : n_fft_(n_fft),
      hop_(hop),
      ceiling_(magnitude_ceiling),
      spectral_(dsp::SpectralConfig::hann(n_fft, hop, dsp::Padding::kSame)) {
  spectral_.validate();
  proj_ = register_module("proj", torch::nn::Linear(hidden, n_fft + 2));
}

HeadOutput IstftHeadImpl::split(const torch::Tensor& pre) const {
  check(pre.size(-1) == n_fft_ + 2, ErrorCode::kShape,
        "head expects " + std::to_string(n_fft_ + 2) + " channels, got " +
            std::to_string(pre.size(-1)));
  const std::int64_t bins = n_fft_ / 2 + 1;
  torch::Tensor mag = torch::exp(pre.narrow(-1, 0, bins)).clamp_max(ceiling_);
  return {mag, pre.narrow(-1, bins, bins)};
}

torch::Tensor IstftHeadImpl::synthesize(const torch::Tensor& pre) const {
  HeadOutput out = split(pre);
  torch::Tensor spec = torch::complex(out.magnitude * torch::cos(out.phase),
                                      out.magnitude * torch::sin(out.phase));
  return dsp::istft(spec, spectral_);
}

torch::Tensor IstftHeadImpl::forward(const torch::Tensor& h) {
  return synthesize(proj_(h));
}

MirrorUpsamplerImpl::MirrorUpsamplerImpl(
    std::int64_t latent_dim, std::int64_t channels,
    const std::vector<std::int64_t>& strides)
    : strides_(strides.rbegin(), strides.rend()) {
  std::int64_t width = channels << strides.size();
  input_ = register_module(
      "input", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(latent_dim, width, 7).padding(3)));
  lstm_ = register_module(
      "lstm", torch::nn::LSTM(
                  torch::nn::LSTMOptions(width, width).num_layers(2).batch_first(
                      true)));
  for (auto s : strides_) {
    ups_->push_back(torch::nn::ConvTranspose1d(
        torch::nn::ConvTranspose1dOptions(width, width / 2, 2 * s).stride(s)));
    residuals_->push_back(ResidualUnit(width / 2, Activation::kElu));
    width /= 2;
  }
  register_module("ups", ups_);
  register_module("residuals", residuals_);
  output_ = register_module(
      "output",
      torch::nn::Conv1d(torch::nn::Conv1dOptions(width, 1, 7).padding(3)));
  init_fan_in_trunc_normal(*this);
}

torch::Tensor MirrorUpsamplerImpl::forward(const torch::Tensor& zq) {
  torch::Tensor h = input_(zq);
  torch::Tensor seq = h.transpose(1, 2);
  h = (std::get<0>(lstm_->forward(seq)) + seq).transpose(1, 2);
  for (std::size_t i = 0; i < strides_.size(); ++i) {
    const std::int64_t s = strides_[i];
    h = ups_[i]->as<torch::nn::ConvTranspose1d>()->forward(torch::elu(h));
    // (L + 1) * s samples out; trimming one stride leaves L * s.
    h = h.narrow(2, s / 2, h.size(2) - s);
    h = residuals_[i]->as<ResidualUnit>()->forward(h);
  }
  return output_(torch::elu(h)).squeeze(1);
}

DecoderImpl::DecoderImpl(DecoderConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.variant == DecoderVariant::kMirror) {
    mirror_ = register_module(
        "mirror", MirrorUpsampler(cfg_.latent_dim, cfg_.mirror_channels,
                                  cfg_.mirror_strides));
    return;
  }
  const auto dim = cfg_.hidden_dim;
  input_ = register_module(
      "input", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(cfg_.latent_dim, dim, 7).padding(3)));
  if (cfg_.use_attention) {
    attention_ =
        register_module("attention", AttentionBlock(dim, cfg_.attn_heads));
  }
  norm_ = register_module(
      "norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
  const double layer_scale =
      cfg_.convnext_depth > 0 ? 1.0 / static_cast<double>(cfg_.convnext_depth)
                              : 1.0;
  for (std::int64_t i = 0; i < cfg_.convnext_depth; ++i) {
    blocks_->push_back(ConvNeXtBlock(dim, cfg_.convnext_kernel,
                                     cfg_.convnext_expansion, layer_scale));
  }
  register_module("blocks", blocks_);
  final_norm_ = register_module(
      "final_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
  head_ = register_module("head", IstftHead(dim, cfg_.n_fft, cfg_.hop,
                                            cfg_.magnitude_ceiling));
  init_fan_in_trunc_normal(*this);
}

torch::Tensor DecoderImpl::backbone(const torch::Tensor& zq) {
  torch::Tensor h = input_(zq).transpose(1, 2);
  if (!attention_.is_empty()) h = attention_(h);
  h = norm_(h);
  for (auto& block : *blocks_) h = block->as<ConvNeXtBlock>()->forward(h);
  return final_norm_(h);
}

torch::Tensor DecoderImpl::forward(const torch::Tensor& zq) {
  check(zq.dim() == 3 && zq.size(1) == cfg_.latent_dim, ErrorCode::kShape,
        "decoder expects [B, " + std::to_string(cfg_.latent_dim) + ", F]");
  check(zq.size(2) >= 1, ErrorCode::kEmptyInput,
        "cannot decode an empty latent sequence");
  if (!mirror_.is_empty()) return mirror_(zq);
  return head_(backbone(zq));
}

AudioBuffer DecoderImpl::decode(const torch::Tensor& zq, int sample_rate) {
  check(zq.dim() == 2 && zq.size(0) >= 1, ErrorCode::kEmptyInput,
        "cannot decode an empty latent sequence");
  torch::NoGradGuard no_grad;
  torch::Tensor audio =
      forward(zq.to(torch::kFloat32).transpose(0, 1).unsqueeze(0));
  return dsp::to_audio(audio.squeeze(0), sample_rate);
}

}  // namespace wavtok
