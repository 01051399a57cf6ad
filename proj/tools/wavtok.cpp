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

// Command-line front end: train, encode, decode, analyze, eval, ablate.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wavtok/analysis.hpp"
#include "wavtok/bitstream.hpp"
#include "wavtok/config.hpp"
#include "wavtok/error.hpp"
#include "wavtok/training.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report_rtf(double elapsed, double audio_seconds) {
  std::printf("rtf %.4f (%.3f s for %.3f s of audio)\n",
              audio_seconds > 0 ? elapsed / audio_seconds : 0.0, elapsed,
              audio_seconds);
}

struct TrainArgs {
  std::string config, manifest, out = "wavtok.ckpt", resume, metrics, split;
  std::int64_t steps = 0, save_every = 0, log_every = 100;
};

void run_train(const TrainArgs& a) {
  using namespace wavtok;
  ExperimentConfig cfg = load_config(a.config);
  if (a.steps > 0) cfg.train.total_steps = a.steps;
  const auto manifest = read_manifest(a.manifest);
  std::optional<std::string> split;
  if (!a.split.empty()) split = a.split;
  auto corpus = load_corpus(manifest, cfg.model.sample_rate, split);
  std::cerr << "loaded " << corpus.size() << " clips\n";

  Trainer trainer = a.resume.empty()
                        ? Trainer(cfg, std::move(corpus))
                        : Trainer::resume(a.resume, std::move(corpus));
  if (!a.metrics.empty()) trainer.set_metrics_log(a.metrics);
  const std::int64_t total = trainer.config().train.total_steps;
  const auto t0 = Clock::now();
  while (trainer.step_count() < total) {
    const auto [g, d] = trainer.step();
    const auto s = trainer.step_count();
    if (a.log_every > 0 && (s % a.log_every == 0 || s == total)) {
      std::fprintf(stderr,
                   "step %lld/%lld total %.4f mel %.4f q %.4f adv %.4f "
                   "feat %.4f disc %.4f util %.3f (%.1f s)\n",
                   static_cast<long long>(s), static_cast<long long>(total),
                   g.total, g.mel, g.quantizer, g.adv, g.feat, d.disc,
                   trainer.last_batch_utilization(), seconds_since(t0));
    }
    if (a.save_every > 0 && s % a.save_every == 0) trainer.save(a.out);
  }
  trainer.save(a.out);
  std::cerr << "saved " << a.out << '\n';
}

void run_encode(const std::string& wav, const std::string& out,
                const std::string& ckpt, bool rtf) {
  using namespace wavtok;
  auto [codec, cfg] = load_codec(ckpt);
  const auto t0 = Clock::now();
  const auto stream = encode_file(wav, codec);
  write_tokens(stream, out);
  const double elapsed = seconds_since(t0);
  std::printf("%llu tokens at %.2f tok/s (%.3f kbps) -> %s\n",
              static_cast<unsigned long long>(stream.frames()),
              token_rate(cfg.model.sample_rate, cfg.model.hop()),
              bitrate(token_rate(cfg.model.sample_rate, cfg.model.hop()),
                      cfg.model.vq.codebook_size),
              out.c_str());
  if (rtf) report_rtf(elapsed, stream.duration_seconds());
}

void run_decode(const std::string& tok, const std::string& out,
                const std::string& ckpt, bool rtf) {
  using namespace wavtok;
  auto [codec, cfg] = load_codec(ckpt);
  const auto t0 = Clock::now();
  const auto stream = read_tokens(tok);
  decode_file(stream, codec, out);
  const double elapsed = seconds_since(t0);
  std::printf("%.3f s of audio -> %s\n", stream.duration_seconds(),
              out.c_str());
  if (rtf) report_rtf(elapsed, stream.duration_seconds());
}

void run_analyze(const std::string& ckpt, const std::string& manifest_path,
                 const std::string& out, const std::string& split) {
  using namespace wavtok;
  auto [codec, cfg] = load_codec(ckpt);
  auto manifest = read_manifest(manifest_path);
  if (!split.empty()) {
    std::erase_if(manifest,
                  [&](const ManifestEntry& e) { return e.split != split; });
  }
  const auto report = analysis::index_distribution(
      codec, manifest, std::filesystem::path(manifest_path).stem().string());
  analysis::write_distribution_csv(report, out);
  std::printf("%lld frames, utilization %.4f, entropy %.3f bits -> %s\n",
              static_cast<long long>(report.total_frames()),
              report.utilization, report.entropy, out.c_str());
}

void run_eval(const std::string& ref, const std::string& deg,
              const std::string& out) {
  using namespace wavtok;
  const auto report = analysis::mel_distance_eval(ref, deg);
  analysis::write_mel_distance_csv(report, out);
  std::printf("%zu pairs, %zu skipped, mel distance %.4f +/- %.4f -> %s\n",
              report.rows.size(), report.skipped.size(), report.mean,
              report.stddev, out.c_str());
}

struct AblateArgs {
  std::string config, manifest, out = "ablation.csv";
  std::int64_t steps = 200;
  std::vector<std::int64_t> sizes;
  std::vector<double> windows;
};

void run_ablate(const AblateArgs& a) {
  using namespace wavtok;
  const ExperimentConfig base = load_config(a.config);
  const auto corpus = load_corpus(read_manifest(a.manifest),
                                  base.model.sample_rate, std::nullopt);
  const auto cells =
      a.sizes.empty() && a.windows.empty()
          ? analysis::standard_grid(base)
          : analysis::product_grid(
                base,
                a.sizes.empty() ? std::vector{base.model.vq.codebook_size}
                                : a.sizes,
                a.windows.empty() ? std::vector{base.train.crop_seconds}
                                  : a.windows);
  analysis::AblationOptions options;
  options.steps = a.steps;
  options.on_cell = [](const analysis::AblationResult& r) {
    std::fprintf(stderr, "%s/%s: %s utilization %.4f mel %.4f\n",
                 r.cell.table.c_str(), r.cell.name.c_str(), r.status.c_str(),
                 r.utilization, r.mel_distance);
  };
  const auto results = analysis::run_grid(cells, corpus, options);
  analysis::write_ablation_csv(results, a.out);
  for (const auto& w : analysis::utilization_trend_warnings(results)) {
    std::cerr << "warning: " << w << '\n';
  }
  std::printf("%zu cells -> %s\n", results.size(), a.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavtok: single-codebook neural audio codec"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Intra-op threads (0 keeps default)");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a codec from a manifest");
  t->add_option("--config", train.config, "YAML experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  t->add_option("--manifest", train.manifest, "TSV of path, duration, split")
      ->required()
      ->check(CLI::ExistingFile);
  t->add_option("-o,--out", train.out, "Checkpoint to write");
  t->add_option("--resume", train.resume, "Continue from a checkpoint")
      ->check(CLI::ExistingFile);
  t->add_option("--metrics", train.metrics, "Append per-step losses as CSV");
  t->add_option("--split", train.split, "Only use manifest rows of this split");
  t->add_option("--steps", train.steps, "Override train.total_steps");
  t->add_option("--save-every", train.save_every, "Checkpoint period in steps");
  t->add_option("--log-every", train.log_every, "Progress period in steps");

  std::string in, out, ckpt;
  bool rtf = false;
  auto* enc = app.add_subcommand("encode", "WAV -> token file");
  enc->add_option("wav", in)->required()->check(CLI::ExistingFile);
  enc->add_option("-o,--out", out)->required();
  enc->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  enc->add_flag("--rtf", rtf, "Print processing time / audio duration");

  auto* dec = app.add_subcommand("decode", "Token file -> WAV");
  dec->add_option("tokens", in)->required()->check(CLI::ExistingFile);
  dec->add_option("-o,--out", out)->required();
  dec->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  dec->add_flag("--rtf", rtf, "Print processing time / audio duration");

  std::string manifest, split;
  auto* ana =
      app.add_subcommand("analyze", "Codebook index distribution over a corpus");
  ana->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  ana->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  ana->add_option("-o,--out", out)->required();
  ana->add_option("--split", split, "Only use manifest rows of this split");

  std::string ref, deg;
  auto* ev = app.add_subcommand("eval", "Mel distance between paired WAVs");
  ev->add_option("--ref", ref)->required()->check(CLI::ExistingDirectory);
  ev->add_option("--deg", deg)->required()->check(CLI::ExistingDirectory);
  ev->add_option("-o,--out", out)->required();

  AblateArgs ablate;
  auto* ab = app.add_subcommand(
      "ablate", "Train and score a grid of codebook/context/component cells");
  ab->add_option("--config", ablate.config, "Base YAML config")
      ->required()
      ->check(CLI::ExistingFile);
  ab->add_option("--manifest", ablate.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  ab->add_option("-o,--out", ablate.out);
  ab->add_option("--steps", ablate.steps, "Training steps per cell");
  ab->add_option("--sizes", ablate.sizes, "Codebook sizes (product grid)");
  ab->add_option("--windows", ablate.windows,
                 "Context windows in seconds (product grid)");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) torch::set_num_threads(threads);

  try {
    if (*t) run_train(train);
    if (*enc) run_encode(in, out, ckpt, rtf);
    if (*dec) run_decode(in, out, ckpt, rtf);
    if (*ana) run_analyze(ckpt, manifest, out, split);
    if (*ev) run_eval(ref, deg, out);
    if (*ab) run_ablate(ablate);
  } catch (const wavtok::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
