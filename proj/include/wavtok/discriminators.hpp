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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wavtok/dsp.hpp"
#include "wavtok/layers.hpp"

namespace wavtok {

struct DiscriminatorConfig {
  std::vector<std::int64_t> periods{2, 3, 5, 7, 11};
  std::vector<std::int64_t> mrd_resolutions{2048, 1024, 512};
  std::vector<double> mrd_bands{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::int64_t> stft_scales{2048, 1024, 512, 256, 128};
  std::vector<std::int64_t> mpd_channels{32, 128, 512, 1024, 1024};
  std::int64_t mrd_channels = 32;
  std::int64_t stft_channels = 32;
  double leaky_slope = 0.1;
  bool use_mpd = true;
  bool use_mrd = true;
  bool use_stft = true;

  void validate() const;
  /// Number of sub-discriminators K.
  std::int64_t count() const;
  /// Shortest input every enabled critic accepts.
  std::int64_t min_length() const;
};

/// Per-critic output: logit map plus intermediate feature maps (L >= 2).
struct CriticResult {
  torch::Tensor logits;
  std::vector<torch::Tensor> features;
};

/// Outputs of all K sub-discriminators for one input batch.
struct CriticOutput {
  std::vector<torch::Tensor> logits;
  std::vector<std::vector<torch::Tensor>> features;

  std::size_t size() const { return logits.size(); }
  void append(CriticResult r);
};

/// Right-pads (reflect) to a multiple of `period` and folds [B, T] into
/// [B, 1, ceil(T / period), period].
torch::Tensor period_reshape(const torch::Tensor& x, std::int64_t period);

/// Bin ranges [begin, end) covering [0, bins) for the given band fractions.
std::vector<std::pair<std::int64_t, std::int64_t>> band_edges(
    std::int64_t bins, const std::vector<double>& fractions);

/// Amplitude-branch input: |S| as [B, 1, F, bins].
torch::Tensor amplitude_input(const torch::Tensor& spec);
/// Complex-branch input: (Re S, Im S) as [B, 2, F, bins].
torch::Tensor complex_input(const torch::Tensor& spec);

class CriticImpl : public torch::nn::Module {
 public:
  /// x: [B, T] waveform.
  virtual CriticResult run(const torch::Tensor& x) = 0;
  virtual std::string name() const = 0;
};

class PeriodCriticImpl : public CriticImpl {
 public:
  PeriodCriticImpl(std::int64_t period, const std::vector<std::int64_t>& channels,
                   double slope);
  CriticResult run(const torch::Tensor& x) override;
  std::string name() const override;

 private:
  std::int64_t period_;
  double slope_;
  std::vector<WNConv2d> convs_;
  WNConv2d post_{nullptr};
};

/// Single-band magnitude spectrogram critic.
class AmplitudeCriticImpl : public CriticImpl {
 public:
  AmplitudeCriticImpl(std::int64_t n_fft, std::int64_t channels, double slope);
  CriticResult run(const torch::Tensor& x) override;
  std::string name() const override;

 private:
  dsp::SpectralConfig spectral_;
  double slope_;
  std::vector<WNConv2d> convs_;
  WNConv2d post_{nullptr};
};

/// Complex spectrogram critic with a separate conv stack per sub-band.
class MultiBandComplexCriticImpl : public CriticImpl {
 public:
  MultiBandComplexCriticImpl(std::int64_t n_fft,
                             const std::vector<double>& bands,
                             std::int64_t channels, double slope);
  CriticResult run(const torch::Tensor& x) override;
  std::string name() const override;

 private:
  dsp::SpectralConfig spectral_;
  std::vector<std::pair<std::int64_t, std::int64_t>> bands_;
  double slope_;
  std::vector<std::vector<WNConv2d>> band_convs_;
  WNConv2d post_{nullptr};
};

/// Complex STFT critic at one time-frequency scale.
class StftCriticImpl : public CriticImpl {
 public:
  StftCriticImpl(std::int64_t n_fft, std::int64_t channels, double slope);
  CriticResult run(const torch::Tensor& x) override;
  std::string name() const override;

 private:
  dsp::SpectralConfig spectral_;
  double slope_;
  std::vector<WNConv2d> convs_;
  WNConv2d post_{nullptr};
};

class DiscriminatorEnsembleImpl : public torch::nn::Module {
 public:
  explicit DiscriminatorEnsembleImpl(DiscriminatorConfig cfg);

  CriticOutput forward(const torch::Tensor& x);

  /// Runs real and fake through every critic in one batched pass; outputs
  /// are index-aligned.
  std::pair<CriticOutput, CriticOutput> forward_pair(const torch::Tensor& real,
                                                     const torch::Tensor& fake);

  std::int64_t count() const {
    return static_cast<std::int64_t>(critics_.size());
  }
  std::vector<std::string> names() const;
  const DiscriminatorConfig& config() const { return cfg_; }

  /// Family slices (MPD, MRD, multi-scale STFT) for inspection.
  CriticOutput forward_mpd(const torch::Tensor& x);
  CriticOutput forward_mrd(const torch::Tensor& x);
  CriticOutput forward_stft(const torch::Tensor& x);

 private:
  CriticOutput run_range(const torch::Tensor& x, std::size_t begin,
                         std::size_t end);

  DiscriminatorConfig cfg_;
  std::vector<std::shared_ptr<CriticImpl>> critics_;
  std::size_t mpd_end_ = 0, mrd_end_ = 0;
};
TORCH_MODULE(DiscriminatorEnsemble);

}  // namespace wavtok
