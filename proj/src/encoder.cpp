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

#include "wavtok/encoder.hpp"

#include <string>

#include "wavtok/dsp.hpp"
#include "wavtok/error.hpp"

namespace wavtok {

namespace F = torch::nn::functional;

void EncoderConfig::validate() const {
  check(channels > 0 && blocks > 0 && latent_dim > 0, ErrorCode::kConfig,
        "encoder channels, blocks and latent_dim must be positive");
  check(static_cast<std::int64_t>(strides.size()) == blocks,
        ErrorCode::kConfig, "encoder needs one stride per block");
  for (auto s : strides) {
    check(s > 0, ErrorCode::kConfig, "strides must be positive");
  }
  check(lstm_layers >= 0 && lstm_hidden >= 0, ErrorCode::kConfig,
        "lstm settings must be non-negative");
}

std::vector<std::int64_t> EncoderConfig::channel_widths() const {
  std::vector<std::int64_t> widths{channels};
  for (std::int64_t b = 0; b < blocks; ++b) widths.push_back(widths.back() * 2);
  return widths;
}

std::int64_t total_stride(const EncoderConfig& cfg) {
  check(!cfg.strides.empty(), ErrorCode::kConfig, "strides must be nonempty");
  std::int64_t product = 1;
  for (auto s : cfg.strides) product *= s;
  return product;
}

ResidualUnitImpl::ResidualUnitImpl(std::int64_t channels, Activation act)
    : act_(act) {
  conv1_ = register_module(
      "conv1", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(channels, channels, 3).padding(1)));
  conv2_ = register_module(
      "conv2", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(channels, channels, 3).padding(1)));
}

torch::Tensor ResidualUnitImpl::forward(const torch::Tensor& x) {
  return x + conv2_(wavtok::apply(act_, conv1_(wavtok::apply(act_, x))));
}

DownsampleBlockImpl::DownsampleBlockImpl(std::int64_t in_channels,
                                         std::int64_t stride, Activation act)
    : act_(act), stride_(stride) {
  residual_ = register_module("residual", ResidualUnit(in_channels, act));
  down_ = register_module(
      "down", torch::nn::Conv1d(torch::nn::Conv1dOptions(
                                    in_channels, 2 * in_channels, 2 * stride)
                                    .stride(stride)));
}

torch::Tensor DownsampleBlockImpl::forward(const torch::Tensor& x) {
  // Total padding of one stride turns kernel 2s / stride s into floor(L / s).
  const std::int64_t left = stride_ / 2;
  const std::int64_t right = stride_ - left;
  torch::Tensor h = wavtok::apply(act_, residual_(x));
  h = F::pad(h, F::PadFuncOptions({left, right}).mode(torch::kConstant));
  return down_(h);
}

EncoderImpl::EncoderImpl(EncoderConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto widths = cfg_.channel_widths();
  input_ = register_module(
      "input", torch::nn::Conv1d(
                   torch::nn::Conv1dOptions(1, cfg_.channels, 7).padding(3)));
  for (std::int64_t b = 0; b < cfg_.blocks; ++b) {
    blocks_->push_back(DownsampleBlock(widths[b], cfg_.strides[b],
                                       cfg_.activation));
  }
  register_module("blocks", blocks_);
  std::int64_t seq_width = widths.back();
  if (cfg_.lstm_layers > 0) {
    lstm_ = register_module(
        "lstm", torch::nn::LSTM(torch::nn::LSTMOptions(widths.back(),
                                                       cfg_.recurrent_width())
                                    .num_layers(cfg_.lstm_layers)
                                    .batch_first(true)));
    seq_width = cfg_.recurrent_width();
  }
  output_ = register_module(
      "output", torch::nn::Conv1d(
                    torch::nn::Conv1dOptions(seq_width, cfg_.latent_dim, 7)
                        .padding(3)));
  init_fan_in_trunc_normal(*this);
}

torch::Tensor EncoderImpl::forward(const torch::Tensor& x) {
  check(x.dim() == 2, ErrorCode::kShape, "encoder expects [batch, samples]");
  const std::int64_t hop = total_stride(cfg_);
  check(x.size(1) >= hop, ErrorCode::kTooShort,
        "input of " + std::to_string(x.size(1)) +
            " samples is shorter than one frame (" + std::to_string(hop) +
            ")");
  torch::Tensor h = input_(x.unsqueeze(1));
  for (auto& block : *blocks_) h = block->as<DownsampleBlock>()->forward(h);
  if (lstm_) {
    torch::Tensor seq = h.transpose(1, 2);
    torch::Tensor out = std::get<0>(lstm_->forward(seq));
    if (out.size(-1) == seq.size(-1)) out = out + seq;
    h = out.transpose(1, 2);
  }
  return output_(wavtok::apply(cfg_.activation, h));
}

LatentSequence EncoderImpl::encode(const AudioBuffer& audio) {
  check(!audio.empty(), ErrorCode::kEmptyInput, "cannot encode empty audio");
  torch::NoGradGuard no_grad;
  torch::Tensor x = dsp::to_tensor(audio).unsqueeze(0);
  torch::Tensor z = forward(x).squeeze(0).transpose(0, 1).contiguous();
  return {z, static_cast<double>(audio.sample_rate()) /
                 static_cast<double>(total_stride(cfg_))};
}

}  // namespace wavtok
