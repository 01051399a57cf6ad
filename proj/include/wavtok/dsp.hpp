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

// Spectral primitives shared by the decoder head, the mel loss and the
// spectrogram critics. Tensor entry points are differentiable and accept any
// leading batch dimensions; the AudioBuffer overloads run in double precision.

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <optional>

#include "wavtok/audio.hpp"

namespace wavtok::dsp {

/// How the analysis frames are aligned with the signal.
///  kCenter: reflect-pad n_fft/2 on both sides, F = len / hop + 1 frames.
///  kSame:   pad (n_fft - hop)/2 on both sides, F = len / hop frames, and the
///           inverse yields exactly F * hop samples.
enum class Padding { kCenter, kSame };

/// Periodic Hann window of length n.
torch::Tensor hann_window(std::int64_t n,
                          torch::Dtype dtype = torch::kFloat32);

struct SpectralConfig {
  std::int64_t n_fft = 1024;
  std::int64_t hop = 256;
  torch::Tensor window;  // length n_fft; Hann when undefined
  Padding padding = Padding::kCenter;

  static SpectralConfig hann(std::int64_t n_fft, std::int64_t hop,
                             Padding padding = Padding::kCenter);

  std::int64_t bins() const { return n_fft / 2 + 1; }
  std::int64_t frame_count(std::int64_t length) const;
  std::int64_t pad_amount() const;
  torch::Tensor window_as(const torch::Tensor& like) const;

  /// Throws kConfig when n_fft is odd or < 2, hop is outside (0, n_fft], the
  /// window has the wrong length, or the shifted squared windows do not sum
  /// to a constant.
  void validate() const;
};

/// Spectrum of a single signal: frames is complex [F, n_fft/2 + 1].
struct ComplexSpectrogram {
  torch::Tensor frames;
  SpectralConfig config;

  std::int64_t num_frames() const { return frames.size(0); }
};

/// x: real [..., T]  ->  complex [..., F, n_fft/2 + 1].
torch::Tensor stft(const torch::Tensor& x, const SpectralConfig& cfg);

/// spec: complex [..., F, n_fft/2 + 1]  ->  real [..., L]. Default L is
/// (F - 1) * hop for kCenter and F * hop for kSame.
torch::Tensor istft(const torch::Tensor& spec, const SpectralConfig& cfg,
                    std::optional<std::int64_t> length = std::nullopt);

ComplexSpectrogram stft(const AudioBuffer& audio, const SpectralConfig& cfg);
AudioBuffer istft(const ComplexSpectrogram& spec, int sample_rate,
                  std::optional<std::int64_t> length = std::nullopt);

struct MelConfig {
  std::int64_t n_mels = 100;
  double fmin = 0.0;
  std::optional<double> fmax;  // Nyquist when unset
  double log_floor = 1e-5;
};

/// Triangular HTK-scale filterbank, [n_mels, n_fft/2 + 1].
torch::Tensor mel_filterbank(const MelConfig& mel, std::int64_t n_fft,
                             int sample_rate);

/// Log-mel transform with a cached filterbank.
class MelTransform {
 public:
  MelTransform(SpectralConfig spectral, MelConfig mel, int sample_rate);

  /// x: real [..., T]  ->  log-mel [..., n_mels, F].
  torch::Tensor operator()(const torch::Tensor& x) const;

  const SpectralConfig& spectral() const { return spectral_; }
  const MelConfig& mel() const { return mel_; }
  int sample_rate() const { return sample_rate_; }

 private:
  SpectralConfig spectral_;
  MelConfig mel_;
  int sample_rate_;
  torch::Tensor filterbank_;
};

/// Log-mel matrix [n_mels, F] of a buffer, computed in double precision.
torch::Tensor mel_spectrogram(const AudioBuffer& audio,
                              const SpectralConfig& cfg, const MelConfig& mel);

/// Settings used by the reconstruction loss: 1024/256 Hann, 100 bands.
SpectralConfig mel_loss_spectral();
MelConfig mel_loss_mel();

torch::Tensor to_tensor(const AudioBuffer& audio,
                        torch::Dtype dtype = torch::kFloat32);
AudioBuffer to_audio(const torch::Tensor& x, int sample_rate);

}  // namespace wavtok::dsp
