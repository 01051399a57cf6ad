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

#include "wavtok/codec.hpp"

#include <string>

#include "wavtok/error.hpp"

namespace wavtok {

void ModelConfig::resolve() {
  decoder.latent_dim = encoder.latent_dim;
  decoder.hop = total_stride(encoder);
  if (decoder.n_fft == 0) decoder.n_fft = 4 * decoder.hop;
  decoder.mirror_channels = encoder.channels;
  decoder.mirror_strides = encoder.strides;
  vq.dim = encoder.latent_dim;
}

void ModelConfig::validate() const {
  check(sample_rate > 0, ErrorCode::kConfig, "sample_rate must be positive");
  encoder.validate();
  vq.validate();
  decoder.validate();
  check(decoder.hop == total_stride(encoder), ErrorCode::kConfig,
        "decoder hop " + std::to_string(decoder.hop) +
            " must equal the encoder stride product " +
            std::to_string(total_stride(encoder)));
  check(decoder.latent_dim == encoder.latent_dim && vq.dim == encoder.latent_dim,
        ErrorCode::kConfig, "latent widths disagree across sections");
}

double ModelConfig::token_rate() const {
  return static_cast<double>(sample_rate) / static_cast<double>(hop());
}

ModelConfig ModelConfig::standard(std::vector<std::int64_t> strides) {
  ModelConfig cfg;
  cfg.encoder.strides = std::move(strides);
  cfg.encoder.blocks = static_cast<std::int64_t>(cfg.encoder.strides.size());
  cfg.decoder.n_fft = 0;
  cfg.resolve();
  return cfg;
}

ModelConfig ModelConfig::toy() {
  ModelConfig cfg;
  cfg.encoder.channels = 8;
  cfg.encoder.latent_dim = 64;
  cfg.vq.codebook_size = 1024;
  cfg.vq.kmeans_iters = 5;
  cfg.decoder.hidden_dim = 128;
  cfg.decoder.attn_heads = 4;
  cfg.decoder.convnext_depth = 4;
  cfg.decoder.n_fft = 0;
  cfg.resolve();
  return cfg;
}

CodecImpl::CodecImpl(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  encoder_ = register_module("encoder", Encoder(cfg_.encoder));
  decoder_ = register_module("decoder", Decoder(cfg_.decoder));
  codebook_ = vq::Codebook::from_vectors(
      torch::randn({cfg_.vq.codebook_size, cfg_.vq.dim}, torch::kFloat64));
}

torch::Tensor CodecImpl::encode_indices(const AudioBuffer& audio) {
  check(!audio.empty(), ErrorCode::kEmptyInput, "cannot encode empty audio");
  check(audio.sample_rate() == cfg_.sample_rate, ErrorCode::kCompatibility,
        "audio at " + std::to_string(audio.sample_rate()) +
            " Hz, model expects " + std::to_string(cfg_.sample_rate));
  return vq::quantize(encoder_->encode(audio), codebook_).indices;
}

AudioBuffer CodecImpl::decode_indices(const torch::Tensor& indices) {
  check(indices.numel() >= 1, ErrorCode::kEmptyInput,
        "cannot decode an empty token sequence");
  return decoder_->decode(vq::lookup(codebook_, indices.reshape({-1})),
                          cfg_.sample_rate);
}

AudioBuffer CodecImpl::reconstruct(const AudioBuffer& audio) {
  return decode_indices(encode_indices(audio));
}

}  // namespace wavtok
