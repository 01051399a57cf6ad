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

// Helpers shared by the unit and acceptance tests.

#pragma once

#include <torch/torch.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wavtok/audio.hpp"
#include "wavtok/config.hpp"

namespace wavtok::testing {

/// Voiced, speech-like clip: a glottal-style harmonic source with a drifting
/// pitch, two moving formant resonances, syllable-rate amplitude envelope and
/// a little breath noise.
inline AudioBuffer synth_voice(std::uint64_t seed, double seconds,
                               int sample_rate = 24000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  const double f0 = 90.0 + 160.0 * u(rng);
  const double drift = 0.5 + 2.0 * u(rng);
  const double syllable = 2.5 + 3.0 * u(rng);
  const double f1 = 400.0 + 500.0 * u(rng), f2 = 1100.0 + 1200.0 * u(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<float> x(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double f = f0 * (1.0 + 0.08 * std::sin(two_pi * drift * t));
    phase += two_pi * f / sample_rate;
    const double g1 = f1 * (1.0 + 0.2 * std::sin(two_pi * 1.3 * t));
    const double g2 = f2 * (1.0 + 0.15 * std::cos(two_pi * 0.9 * t));
    double s = 0.0;
    for (int h = 1; h * f < 0.45 * sample_rate && h <= 40; ++h) {
      const double fh = h * f;
      const double r1 = 1.0 / (1.0 + std::pow((fh - g1) / 120.0, 2));
      const double r2 = 0.6 / (1.0 + std::pow((fh - g2) / 180.0, 2));
      s += (r1 + r2 + 0.05) * std::sin(h * phase) / std::sqrt(h);
    }
    const double env = 0.55 + 0.45 * std::sin(two_pi * syllable * t);
    x[i] = static_cast<float>(0.25 * env * s / 3.0 + 0.003 * noise(rng));
  }
  return AudioBuffer(std::move(x), sample_rate);
}

inline std::vector<AudioBuffer> synth_corpus(std::size_t count, double seconds,
                                             std::uint64_t seed = 1000,
                                             int sample_rate = 24000) {
  std::vector<AudioBuffer> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(synth_voice(seed + i, seconds, sample_rate));
  }
  return out;
}

/// Pearson correlation of two equal-length signals.
inline double correlation(const torch::Tensor& a, const torch::Tensor& b) {
  torch::Tensor x = a.to(torch::kFloat64).flatten();
  torch::Tensor y = b.to(torch::kFloat64).flatten();
  x = x - x.mean();
  y = y - y.mean();
  const double den =
      std::sqrt((x * x).sum().item<double>() * (y * y).sum().item<double>());
  return den > 0 ? (x * y).sum().item<double>() / den : 0.0;
}

/// Smallest configuration that exercises every code path quickly.
inline ExperimentConfig tiny_experiment() {
  ExperimentConfig cfg;
  auto& m = cfg.model;
  m.encoder.channels = 4;
  m.encoder.latent_dim = 16;
  m.encoder.lstm_layers = 1;
  m.vq.codebook_size = 32;
  m.vq.kmeans_iters = 3;
  m.decoder.hidden_dim = 32;
  m.decoder.attn_heads = 2;
  m.decoder.convnext_depth = 1;
  m.decoder.n_fft = 0;
  m.resolve();
  auto& d = cfg.discriminators;
  d.periods = {2, 3};
  d.mpd_channels = {4, 8, 8};
  d.mrd_resolutions = {512};
  d.mrd_channels = 4;
  d.stft_scales = {256};
  d.stft_channels = 4;
  cfg.train.batch_size = 2;
  cfg.train.crop_seconds = 0.25;
  cfg.train.max_clip_seconds = 1.0;
  cfg.train.total_steps = 100;
  cfg.train.seed = 7;
  return cfg;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("wavtok_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace wavtok::testing
