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

#include "wavtok/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "wavtok/dsp.hpp"
#include "wavtok/error.hpp"
#include "wavtok/losses.hpp"
#include "wavtok/vq.hpp"

namespace wavtok::analysis {
namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  check(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(10);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::filesystem::path> wav_files(const std::filesystem::path& dir) {
  check(std::filesystem::is_directory(dir), ErrorCode::kIo,
        "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

double entropy_bits(std::span<const std::int64_t> histogram) {
  const double total = static_cast<double>(
      std::accumulate(histogram.begin(), histogram.end(), std::int64_t{0}));
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (auto c : histogram) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

std::int64_t UtilizationReport::total_frames() const {
  return std::accumulate(histogram.begin(), histogram.end(), std::int64_t{0});
}

UtilizationReport UtilizationReport::from_histogram(
    std::vector<std::int64_t> histogram, std::string dataset) {
  UtilizationReport r;
  r.utilization = vq::utilization_rate(histogram);
  r.entropy = entropy_bits(histogram);
  r.histogram = std::move(histogram);
  r.dataset = std::move(dataset);
  return r;
}

UtilizationReport index_distribution(Codec& codec,
                                     const std::vector<AudioBuffer>& corpus,
                                     std::string dataset) {
  check(!corpus.empty(), ErrorCode::kEmptyInput, "corpus is empty");
  torch::NoGradGuard no_grad;
  codec->eval();
  const auto V = codec->config().vq.codebook_size;
  std::vector<std::int64_t> total(static_cast<std::size_t>(V), 0);
  for (const auto& clip : corpus) {
    const auto h = vq::index_histogram(codec->encode_indices(clip), V);
    for (std::size_t i = 0; i < h.size(); ++i) total[i] += h[i];
  }
  return UtilizationReport::from_histogram(std::move(total), std::move(dataset));
}

UtilizationReport index_distribution(Codec& codec,
                                     const DatasetManifest& manifest,
                                     std::string dataset) {
  return index_distribution(
      codec, load_corpus(manifest, codec->config().sample_rate),
      std::move(dataset));
}

void write_distribution_csv(const UtilizationReport& report,
                            const std::filesystem::path& path) {
  auto out = open_csv(path);
  const double total = static_cast<double>(report.total_frames());
  out << "index,count,probability\n";
  for (std::size_t i = 0; i < report.histogram.size(); ++i) {
    const auto c = report.histogram[i];
    out << i << ',' << c << ',' << (total > 0 ? c / total : 0.0) << '\n';
  }
}

double mel_distance(const AudioBuffer& reference, const AudioBuffer& degraded) {
  check(reference.sample_rate() == degraded.sample_rate(),
        ErrorCode::kCompatibility, "sample rates differ");
  const auto n = std::min(reference.size(), degraded.size());
  check(n > 0, ErrorCode::kEmptyInput, "cannot compare empty audio");
  const dsp::MelTransform mel(dsp::mel_loss_spectral(), dsp::mel_loss_mel(),
                              reference.sample_rate());
  torch::NoGradGuard no_grad;
  auto x = dsp::to_tensor(reference).narrow(0, 0, static_cast<std::int64_t>(n));
  auto y = dsp::to_tensor(degraded).narrow(0, 0, static_cast<std::int64_t>(n));
  return losses::mel_loss(x.unsqueeze(0), y.unsqueeze(0), mel).item<double>();
}

MelDistanceReport mel_distance_eval(const std::filesystem::path& ref_dir,
                                    const std::filesystem::path& deg_dir) {
  MelDistanceReport report;
  std::map<std::string, std::filesystem::path> degraded;
  for (const auto& p : wav_files(deg_dir)) degraded[p.filename().string()] = p;
  auto skip = [&](const std::string& name, const std::string& why) {
    std::cerr << "warning: skipping " << name << ": " << why << '\n';
    report.skipped.push_back(name);
  };
  for (const auto& ref : wav_files(ref_dir)) {
    const auto name = ref.filename().string();
    auto it = degraded.find(name);
    if (it == degraded.end()) {
      skip(name, "no partner in " + deg_dir.string());
      continue;
    }
    try {
      report.rows.push_back(
          {name, mel_distance(read_wav(ref), read_wav(it->second))});
    } catch (const std::exception& e) {
      skip(name, e.what());
    }
    degraded.erase(it);
  }
  for (const auto& [name, path] : degraded) {
    skip(name, "no partner in " + ref_dir.string());
  }
  const double n = static_cast<double>(report.rows.size());
  if (n > 0) {
    for (const auto& r : report.rows) report.mean += r.distance;
    report.mean /= n;
    if (n > 1) {
      double ss = 0.0;
      for (const auto& r : report.rows) {
        ss += (r.distance - report.mean) * (r.distance - report.mean);
      }
      report.stddev = std::sqrt(ss / (n - 1.0));
    }
  }
  return report;
}

void write_mel_distance_csv(const MelDistanceReport& report,
                            const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "file,mel_distance\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.file) << ',' << r.distance << '\n';
  }
  out << "mean," << report.mean << '\n';
  out << "std," << report.stddev << '\n';
}

std::vector<AblationCell> standard_grid(const ExperimentConfig& base) {
  std::vector<AblationCell> cells =
      product_grid(base, {16384, 8192, 4096, 1024}, {base.train.crop_seconds});
  for (auto& c : cells) c.table = "codebook";
  for (double w : {1.0, 3.0, 5.0}) {
    AblationCell c{"context", "window_" + std::to_string(static_cast<int>(w)) + "s",
                   base};
    c.config.model.vq.codebook_size = 4096;
    c.config.train.crop_seconds = w;
    c.config.train.max_clip_seconds = std::max(w, base.train.max_clip_seconds);
    cells.push_back(std::move(c));
  }
  AblationCell full{"components", "full", base};
  AblationCell mirror{"components", "mirror_decoder", base};
  mirror.config.model.decoder.variant = DecoderVariant::kMirror;
  AblationCell no_attn{"components", "no_attention", base};
  no_attn.config.model.decoder.use_attention = false;
  AblationCell no_stft{"components", "no_stft_discriminator", base};
  no_stft.config.discriminators.use_stft = false;
  for (auto* c : {&full, &mirror, &no_attn, &no_stft}) cells.push_back(*c);
  return cells;
}

std::vector<AblationCell> product_grid(const ExperimentConfig& base,
                                       const std::vector<std::int64_t>& sizes,
                                       const std::vector<double>& windows) {
  std::vector<AblationCell> cells;
  for (auto v : sizes) {
    for (double w : windows) {
      std::ostringstream name;
      name << "V" << v << "_w" << w << "s";
      AblationCell c{"grid", name.str(), base};
      c.config.model.vq.codebook_size = v;
      c.config.train.crop_seconds = w;
      c.config.train.max_clip_seconds = std::max(w, base.train.max_clip_seconds);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::vector<AblationResult> run_grid(const std::vector<AblationCell>& cells,
                                     const std::vector<AudioBuffer>& corpus,
                                     const AblationOptions& options) {
  std::vector<AblationResult> results;
  for (const auto& cell : cells) {
    AblationResult r;
    r.cell = cell;
    try {
      Trainer trainer(cell.config, corpus);
      for (std::int64_t s = 0; s < options.steps; ++s) {
        trainer.step();
        ++r.steps;
      }
      Codec& codec = trainer.codec();
      r.utilization = index_distribution(codec, corpus).utilization;
      torch::NoGradGuard no_grad;
      double sum = 0.0;
      for (const auto& clip : corpus) {
        sum += mel_distance(clip, codec->reconstruct(clip));
      }
      r.mel_distance = sum / static_cast<double>(corpus.size());
      r.status = "ok";
    } catch (const std::exception& e) {
      r.status = std::string("failed: ") + e.what();
    }
    if (options.on_cell) options.on_cell(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<std::string> utilization_trend_warnings(
    const std::vector<AblationResult>& results) {
  std::vector<std::string> warnings;
  for (const auto& small : results) {
    for (const auto& large : results) {
      if (small.status != "ok" || large.status != "ok") continue;
      const auto& a = small.cell.config;
      const auto& b = large.cell.config;
      if (small.cell.table != large.cell.table ||
          a.train.crop_seconds != b.train.crop_seconds ||
          a.model.vq.codebook_size >= b.model.vq.codebook_size) {
        continue;
      }
      if (small.utilization < large.utilization) {
        std::ostringstream w;
        w << "utilization of V=" << a.model.vq.codebook_size << " ("
          << small.utilization << ") below V=" << b.model.vq.codebook_size
          << " (" << large.utilization << ")";
        warnings.push_back(w.str());
      }
    }
  }
  return warnings;
}

std::string ablation_csv_header() {
  return "table,cell,codebook_size,context_window_s,decoder,attention,"
         "stft_discriminator,steps,status,utilization,mel_distance,utmos";
}

void write_ablation_csv(const std::vector<AblationResult>& results,
                        const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << ablation_csv_header() << '\n';
  for (const auto& r : results) {
    const auto& cfg = r.cell.config;
    const bool ok = r.status == "ok";
    out << csv_field(r.cell.table) << ',' << csv_field(r.cell.name) << ','
        << cfg.model.vq.codebook_size << ',' << cfg.train.crop_seconds << ','
        << (cfg.model.decoder.variant == DecoderVariant::kMirror ? "mirror"
                                                                 : "istft")
        << ',' << (cfg.model.decoder.use_attention ? "true" : "false") << ','
        << (cfg.discriminators.use_stft ? "true" : "false") << ',' << r.steps
        << ',' << csv_field(r.status) << ',';
    if (ok) out << r.utilization << ',' << r.mel_distance;
    else out << ',';
    out << ",\n";
  }
}

}  // namespace wavtok::analysis
