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

// Single-stage vector quantizer with a large EMA codebook.
//
// The codebook never receives gradients: its vectors track exponentially
// decayed means of the latents assigned to them, and codes that go unused
// for more than `revival_age` batches are re-seeded from live batch frames.
// All codebook state is kept in double precision.

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wavtok/encoder.hpp"

namespace wavtok::vq {

struct VQConfig {
  std::int64_t codebook_size = 4096;
  std::int64_t dim = 512;
  double ema_decay = 0.99;
  std::int64_t revival_age = 2;
  bool kmeans_init = true;
  std::int64_t kmeans_iters = 10;
  /// Latent frames gathered before k-means; 0 selects 2 * codebook_size.
  std::int64_t init_buffer_frames = 0;
  /// Laplace smoothing added to the EMA cluster sizes.
  double epsilon = 1e-5;

  void validate() const;
  std::int64_t buffer_frames() const {
    return init_buffer_frames > 0 ? init_buffer_frames : 2 * codebook_size;
  }
};

struct Codebook {
  torch::Tensor vectors;           // [V, D] float64
  torch::Tensor ema_cluster_size;  // [V]    float64
  torch::Tensor ema_embed_sum;     // [V, D] float64
  torch::Tensor usage_age;         // [V]    int64, batches since last use

  std::int64_t size() const { return vectors.size(0); }
  std::int64_t dim() const { return vectors.size(1); }
  Codebook clone() const;

  /// Codebook whose EMA statistics are (size 1, sum = vector).
  static Codebook from_vectors(const torch::Tensor& vectors);
};

struct QuantizationResult {
  torch::Tensor indices;    // [T] int64 in [0, V)
  torch::Tensor quantized;  // [T, D], dtype of the latents
  torch::Tensor distances;  // [T] float64, squared L2 to the chosen code
};

/// Lloyd k-means (k = V, k-means++ seeding) over buffered latent frames
/// [N, D]. Throws kInsufficientInitData when N < V.
Codebook kmeans_init(const torch::Tensor& buffer, const VQConfig& cfg,
                     std::uint64_t seed);

/// Nearest code per frame with smallest-index tie-breaking.
QuantizationResult quantize(const torch::Tensor& latents, const Codebook& book);
QuantizationResult quantize(const LatentSequence& latents,
                            const Codebook& book);

/// Table lookup: indices [T] -> vectors [T, D] (float32).
torch::Tensor lookup(const Codebook& book, const torch::Tensor& indices);

/// One EMA step. Only codes assigned in this batch move; every other code
/// ages by one batch.
Codebook ema_update(const Codebook& book, const torch::Tensor& latents,
                    const torch::Tensor& indices, const VQConfig& cfg);

/// Replaces every code whose usage_age exceeds revival_age with a uniformly
/// sampled frame of `batch` [N, D]. Dead codes are visited in index order.
Codebook revive_dead(const Codebook& book, const torch::Tensor& batch,
                     const VQConfig& cfg, std::uint64_t seed);

/// Per-code assignment counts.
std::vector<std::int64_t> index_histogram(const torch::Tensor& indices,
                                          std::int64_t codebook_size);

/// Fraction of codes with a nonzero count.
double utilization_rate(std::span<const std::int64_t> histogram);

/// CSV with header `index,count,usage_age,v0..v{D-1}`.
void export_codebook_csv(const Codebook& book,
                         std::span<const std::int64_t> histogram,
                         const std::filesystem::path& path);

}  // namespace wavtok::vq
