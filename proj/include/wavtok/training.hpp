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
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wavtok/audio.hpp"
#include "wavtok/codec.hpp"
#include "wavtok/config.hpp"
#include "wavtok/discriminators.hpp"
#include "wavtok/losses.hpp"

namespace wavtok {

struct ManifestEntry {
  std::filesystem::path path;
  double duration = 0.0;
  std::string split = "train";
};
using DatasetManifest = std::vector<ManifestEntry>;

/// Tab-separated `path<TAB>duration<TAB>split`, one entry per line. Relative
/// paths resolve against the manifest's directory; `#` starts a comment.
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);

/// Loads (and resamples) every entry, optionally restricted to one split.
std::vector<AudioBuffer> load_corpus(const DatasetManifest& manifest,
                                     int sample_rate,
                                     const std::optional<std::string>& split = {});

/// Cosine-decayed learning rate; throws kInvalidArgument outside
/// [0, total_steps].
double lr_at(std::int64_t step, const TrainConfig& cfg);

/// Truncates to max_clip_seconds, then takes a uniform random window of
/// crop_seconds. Shorter clips are zero-padded at the end (`padded` is set).
AudioBuffer crop_sample(const AudioBuffer& audio, const TrainConfig& cfg,
                        std::mt19937_64& rng, bool* padded = nullptr);

/// Alternating generator / critic training over an in-memory corpus.
///
/// Each call to step() draws one batch, runs one generator update (which
/// also performs the codebook EMA update and dead-code revival) and then
/// one critic update on the same batch. The codebook is initialized with
/// k-means over buffered latents before the first generator update.
class Trainer {
 public:
  Trainer(ExperimentConfig cfg, std::vector<AudioBuffer> corpus);
  Trainer(Trainer&&) = default;
  Trainer& operator=(Trainer&&) = default;

  /// Restores a checkpoint written by save(); the corpus is supplied again.
  static Trainer resume(const std::filesystem::path& checkpoint,
                        std::vector<AudioBuffer> corpus);

  /// Draws [batch_size, crop_samples] from the corpus.
  torch::Tensor sample_batch();
  void initialize_codebook();

  losses::LossReport train_step_g(const torch::Tensor& batch);
  /// Generator-side loss terms on `batch` without updating anything.
  losses::LossReport evaluate(const torch::Tensor& batch);
  losses::LossReport train_step_d(const torch::Tensor& batch);
  std::pair<losses::LossReport, losses::LossReport> step();

  void save(const std::filesystem::path& path);
  void set_metrics_log(const std::filesystem::path& path);
  void set_fault_dir(const std::filesystem::path& dir) { fault_dir_ = dir; }

  std::int64_t step_count() const { return step_; }
  bool codebook_ready() const { return codebook_ready_; }
  /// Fraction of codes used by the most recent generator batch.
  double last_batch_utilization() const { return last_utilization_; }
  Codec& codec() { return codec_; }
  DiscriminatorEnsemble& discriminators() { return disc_; }
  const ExperimentConfig& config() const { return cfg_; }

 private:
  struct Forward {
    torch::Tensor reference, reconstruction, latents;
    vq::QuantizationResult quant;
  };
  Forward generator_forward(const torch::Tensor& batch, bool straight_through);
  losses::GeneratorTerms generator_terms(const Forward& f);
  bool critics_active() const;
  void set_learning_rate();
  [[noreturn]] void fault(const std::string& what,
                          const losses::LossReport& report);
  void log(const losses::LossReport& report);

  ExperimentConfig cfg_;
  std::vector<AudioBuffer> corpus_;
  Codec codec_{nullptr};
  DiscriminatorEnsemble disc_{nullptr};
  std::unique_ptr<torch::optim::AdamW> opt_g_, opt_d_;
  std::unique_ptr<dsp::MelTransform> mel_;
  std::mt19937_64 rng_;
  std::int64_t step_ = 0;
  bool codebook_ready_ = false;
  bool expect_g_ = true;
  bool warned_padding_ = false;
  double last_utilization_ = 0.0;
  std::unique_ptr<std::ofstream> metrics_;
  std::filesystem::path fault_dir_;
};

/// Checkpoint container: "WVCK", u32 version, then the YAML config and a
/// tensor archive (model, codebook statistics, critics, optimizer states,
/// step counter, sampler state), each length-prefixed.
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Loads only the generator side (encoder, codebook, decoder).
std::pair<Codec, ExperimentConfig> load_codec(
    const std::filesystem::path& checkpoint);

}  // namespace wavtok
