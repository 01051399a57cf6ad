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

// Measurement tools: codebook index distributions, paired mel-distance
// evaluation and a driver for small-scale ablation grids.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavtok/audio.hpp"
#include "wavtok/codec.hpp"
#include "wavtok/config.hpp"
#include "wavtok/training.hpp"

namespace wavtok::analysis {

/// Shannon entropy of the normalized histogram, in bits.
double entropy_bits(std::span<const std::int64_t> histogram);

struct UtilizationReport {
  std::vector<std::int64_t> histogram;
  double utilization = 0.0;
  double entropy = 0.0;
  std::string dataset;

  std::int64_t total_frames() const;
  static UtilizationReport from_histogram(std::vector<std::int64_t> histogram,
                                          std::string dataset = {});
};

/// Encodes every clip and accumulates code counts.
UtilizationReport index_distribution(Codec& codec,
                                     const std::vector<AudioBuffer>& corpus,
                                     std::string dataset = {});
UtilizationReport index_distribution(Codec& codec,
                                     const DatasetManifest& manifest,
                                     std::string dataset = {});

/// `index,count,probability`, one row per code in index order.
void write_distribution_csv(const UtilizationReport& report,
                            const std::filesystem::path& path);

struct MelDistanceRow {
  std::string file;
  double distance = 0.0;
};

struct MelDistanceReport {
  std::vector<MelDistanceRow> rows;
  std::vector<std::string> skipped;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Log-mel L1 distance between two clips, truncated to the shorter length.
double mel_distance(const AudioBuffer& reference, const AudioBuffer& degraded);

/// Pairs `.wav` files by name. Files without a partner (or that fail to
/// load) are listed in `skipped` with a warning on stderr.
MelDistanceReport mel_distance_eval(const std::filesystem::path& ref_dir,
                                    const std::filesystem::path& deg_dir);

/// `file,mel_distance` rows followed by `mean` and `std` rows.
void write_mel_distance_csv(const MelDistanceReport& report,
                            const std::filesystem::path& path);

struct AblationCell {
  std::string table;  // "codebook", "context" or "components"
  std::string name;
  ExperimentConfig config;
};

/// Codebook sizes {16384, 8192, 4096, 1024}, context windows {1, 3, 5} s,
/// and the full / mirror decoder / no attention / no STFT critic rows, all
/// derived from `base`.
std::vector<AblationCell> standard_grid(const ExperimentConfig& base);

/// Cartesian product of codebook sizes and context windows.
std::vector<AblationCell> product_grid(const ExperimentConfig& base,
                                       const std::vector<std::int64_t>& sizes,
                                       const std::vector<double>& windows);

struct AblationResult {
  AblationCell cell;
  std::int64_t steps = 0;
  std::string status;  // "ok" or "failed: <reason>"
  double utilization = 0.0;
  double mel_distance = 0.0;
};

struct AblationOptions {
  std::int64_t steps = 200;
  /// Called after each cell finishes.
  std::function<void(const AblationResult&)> on_cell;
};

/// Trains every cell on `corpus` and measures utilization and mel distance
/// on the same clips. A failing cell is recorded and the grid continues.
std::vector<AblationResult> run_grid(const std::vector<AblationCell>& cells,
                                     const std::vector<AudioBuffer>& corpus,
                                     const AblationOptions& options);

/// Warnings for results that contradict the expected trend that smaller
/// codebooks are at least as well utilized as larger ones.
std::vector<std::string> utilization_trend_warnings(
    const std::vector<AblationResult>& results);

/// Columns: table, cell, codebook_size, context_window_s, decoder, attention,
/// stft_discriminator, steps, status, utilization, mel_distance, utmos. The
/// utmos column is left empty for externally computed scores.
std::string ablation_csv_header();
void write_ablation_csv(const std::vector<AblationResult>& results,
                        const std::filesystem::path& path);

}  // namespace wavtok::analysis
