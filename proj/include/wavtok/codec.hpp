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
#include "wavtok/decoder.hpp"
#include "wavtok/encoder.hpp"
#include "wavtok/vq.hpp"

namespace wavtok {

/// Generator-side configuration: encoder, quantizer and decoder.
struct ModelConfig {
  int sample_rate = 24000;
  EncoderConfig encoder;
  vq::VQConfig vq;
  DecoderConfig decoder;

  /// Copies shared quantities across sections (latent width, hop, mirror
  /// strides) and fills n_fft = 4 * hop when it is 0.
  void resolve();
  void validate() const;
  std::int64_t hop() const { return total_stride(encoder); }
  double token_rate() const;

  /// Full-size model with the given strides, e.g. {2, 4, 5, 8} or {4, 5, 5, 6}.
  static ModelConfig standard(std::vector<std::int64_t> strides = {2, 4, 5, 8});
  /// Narrow model for CPU-scale experiments.
  static ModelConfig toy();
};

/// Encoder + single codebook + decoder.
class CodecImpl : public torch::nn::Module {
 public:
  explicit CodecImpl(ModelConfig cfg);

  /// Inference path: audio -> code indices [F].
  torch::Tensor encode_indices(const AudioBuffer& audio);
  /// Inference path: code indices [F] -> audio of F * hop samples.
  AudioBuffer decode_indices(const torch::Tensor& indices);
  /// encode_indices followed by decode_indices.
  AudioBuffer reconstruct(const AudioBuffer& audio);

  Encoder& encoder() { return encoder_; }
  Decoder& decoder() { return decoder_; }
  vq::Codebook& codebook() { return codebook_; }
  const vq::Codebook& codebook() const { return codebook_; }
  const ModelConfig& config() const { return cfg_; }

 private:
  ModelConfig cfg_;
  Encoder encoder_{nullptr};
  Decoder decoder_{nullptr};
  vq::Codebook codebook_;
};
TORCH_MODULE(Codec);

}  // namespace wavtok
