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

#include <cstdint>
#include <filesystem>
#include <string>

#include "wavtok/codec.hpp"
#include "wavtok/discriminators.hpp"
#include "wavtok/losses.hpp"

namespace wavtok {

struct TrainConfig {
  double crop_seconds = 3.0;
  double max_clip_seconds = 10.0;
  std::int64_t batch_size = 40;
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.01;
  std::int64_t total_steps = 1000000;
  std::uint64_t seed = 0;
  /// Global gradient-norm clip; 0 disables clipping.
  double grad_clip = 0.0;
  /// Steps before critics are trained and adversarial terms switch on.
  std::int64_t disc_warmup_steps = 0;
  losses::Reduction quantizer_reduction = losses::Reduction::kSum;

  void validate() const;
};

struct ExperimentConfig {
  ModelConfig model;
  DiscriminatorConfig discriminators;
  losses::LossWeights weights;
  TrainConfig train;

  void validate() const;
};

/// YAML with top-level sections `model` (encoder, vq, decoder),
/// `discriminators`, `loss` and `train`. Missing keys keep their defaults.
ExperimentConfig parse_config(const std::string& yaml);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_yaml(const ExperimentConfig& cfg);

}  // namespace wavtok
