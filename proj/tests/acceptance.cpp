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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "wavtok/analysis.hpp"
#include "wavtok/bitstream.hpp"
#include "wavtok/codec.hpp"
#include "wavtok/discriminators.hpp"
#include "wavtok/dsp.hpp"
#include "wavtok/error.hpp"
#include "wavtok/losses.hpp"
#include "wavtok/training.hpp"
#include "wavtok/vq.hpp"

namespace wavtok {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  double overfit_lr = 1e-3;
  std::int64_t overfit_steps = 2000;
  std::int64_t ablation_steps = 50;
  std::filesystem::path artifacts;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(to_string(e.code()));
  }
  return "no error";
}

// Toy critics: same families and arity rules as the defaults, narrower and
// with fewer resolutions so a CPU run fits its budget.
void use_toy_critics(DiscriminatorConfig& d) {
  d.mpd_channels = {8, 16, 32, 32, 32};
  d.mrd_channels = 8;
  d.mrd_resolutions = {1024};
  d.stft_channels = 8;
  d.stft_scales = {512, 128};
}

Outcome token_arithmetic() {
  EncoderConfig a, b;
  a.strides = {2, 4, 5, 8};
  b.strides = {4, 5, 5, 6};
  const double r75 = token_rate(24000, total_stride(a));
  const double r40 = token_rate(24000, total_stride(b));
  const double k09 = bitrate(r75, 4096);
  const double k048 = bitrate(r40, 4096);
  std::ostringstream d;
  d << r75 << " tok/s " << k09 << " kbps; " << r40 << " tok/s " << k048
    << " kbps";
  return {r75 == 75.0 && r40 == 40.0 && k09 == 0.9 && k048 == 0.48, d.str()};
}

Outcome stft_round_trip() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> len(1000, 100000);
  const std::vector<dsp::SpectralConfig> configs{
      dsp::SpectralConfig::hann(1024, 256),
      dsp::SpectralConfig::hann(1280, 320),
      dsp::SpectralConfig::hann(512, 128),
      dsp::SpectralConfig::hann(64, 16)};
  torch::manual_seed(2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& cfg = configs[static_cast<std::size_t>(i) % configs.size()];
    const auto n = len(rng);
    const auto x = torch::randn({n});
    const auto y = dsp::istft(dsp::stft(x, cfg), cfg, n);
    const double err = ((y - x).abs().max() / x.abs().max()).item<double>();
    worst = std::max(worst, err);
  }
  return {worst <= 1e-5, "worst relative max error " + fmt(worst)};
}

std::int64_t brute_nearest(const torch::Tensor& z, const torch::Tensor& e) {
  auto za = z.accessor<double, 1>();
  auto ea = e.accessor<double, 2>();
  std::int64_t best = 0;
  double best_d = INFINITY;
  for (std::int64_t v = 0; v < e.size(0); ++v) {
    double d = 0.0;
    for (std::int64_t j = 0; j < e.size(1); ++j) {
      d += (za[j] - ea[v][j]) * (za[j] - ea[v][j]);
    }
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

Outcome vq_oracle() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> size(1, 32);
  torch::manual_seed(3);
  std::int64_t frames = 0, mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto t = size(rng), v = size(rng), d = size(rng);
    const auto z = torch::randn({t, d}, torch::kFloat64);
    const auto book =
        vq::Codebook::from_vectors(torch::randn({v, d}, torch::kFloat64));
    const auto got = vq::quantize(z, book).indices;
    for (std::int64_t f = 0; f < t; ++f) {
      ++frames;
      if (got[f].item<std::int64_t>() != brute_nearest(z[f], book.vectors)) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0,
          std::to_string(mismatches) + " mismatches over " +
              std::to_string(frames) + " frames"};
}

Outcome ema_closed_form() {
  constexpr int V = 4, D = 3, N = 6;
  vq::VQConfig cfg;
  cfg.codebook_size = V;
  cfg.dim = D;
  cfg.ema_decay = 0.99;
  torch::manual_seed(4);
  auto book = vq::Codebook::from_vectors(torch::randn({V, D}, torch::kFloat64));

  // Hand recurrence in plain doubles.
  const double g = cfg.ema_decay, eps = cfg.epsilon;
  std::vector<double> size(V, 1.0);
  std::vector<std::vector<double>> sum(V), vec(V);
  for (int i = 0; i < V; ++i) {
    for (int j = 0; j < D; ++j) {
      vec[i].push_back(book.vectors[i][j].item<double>());
      sum[i].push_back(vec[i][j]);
    }
  }
  double worst = 0.0;
  for (int batch = 0; batch < 10; ++batch) {
    const auto z = torch::randn({N, D}, torch::kFloat64);
    const auto idx = vq::quantize(z, book).indices;
    book = vq::ema_update(book, z, idx, cfg);

    std::vector<double> count(V, 0.0);
    std::vector<std::vector<double>> batch_sum(V, std::vector<double>(D, 0.0));
    for (int f = 0; f < N; ++f) {
      const auto k = idx[f].item<std::int64_t>();
      count[k] += 1.0;
      for (int j = 0; j < D; ++j) batch_sum[k][j] += z[f][j].item<double>();
    }
    double total = 0.0;
    for (int i = 0; i < V; ++i) {
      size[i] = g * size[i] + (1 - g) * count[i];
      for (int j = 0; j < D; ++j) {
        sum[i][j] = g * sum[i][j] + (1 - g) * batch_sum[i][j];
      }
      total += size[i];
    }
    for (int i = 0; i < V; ++i) {
      if (count[i] == 0.0) continue;
      const double smoothed = (size[i] + eps) / (total + V * eps) * total;
      for (int j = 0; j < D; ++j) vec[i][j] = sum[i][j] / smoothed;
    }
    for (int i = 0; i < V; ++i) {
      worst = std::max(worst, std::abs(book.ema_cluster_size[i].item<double>() -
                                       size[i]));
      for (int j = 0; j < D; ++j) {
        worst = std::max(
            worst, std::abs(book.vectors[i][j].item<double>() - vec[i][j]));
      }
    }
  }
  return {worst <= 1e-6, "max deviation " + fmt(worst) + " over 10 batches"};
}

Outcome dead_code_revival() {
  vq::VQConfig cfg;
  cfg.codebook_size = 4;
  cfg.dim = 2;
  cfg.revival_age = 2;
  auto run = [&](std::uint64_t seed) {
    auto book = vq::Codebook::from_vectors(torch::tensor(
        {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {50.0, 50.0}}, torch::kFloat64));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.05);
    int revived_at = -1;
    for (int batch = 1; batch <= 10 && revived_at < 0; ++batch) {
      auto z = torch::empty({6, 2}, torch::kFloat64);
      for (int f = 0; f < 6; ++f) {
        z[f][0] = (f % 3 == 1 ? 1.0 : 0.0) + jitter(rng);
        z[f][1] = (f % 3 == 2 ? 1.0 : 0.0) + jitter(rng);
      }
      const auto r = vq::quantize(z, book);
      book = vq::ema_update(book, z, r.indices, cfg);
      book = vq::revive_dead(book, z, cfg, seed + static_cast<unsigned>(batch));
      if (book.vectors[3][0].item<double>() < 10.0) revived_at = batch;
    }
    return std::make_pair(revived_at, book.vectors.clone());
  };
  const auto [at_a, book_a] = run(5);
  const auto [at_b, book_b] = run(5);
  const bool in_time = at_a >= 1 && at_a <= cfg.revival_age + 1;
  const bool deterministic = at_a == at_b && torch::equal(book_a, book_b);
  return {in_time && deterministic,
          "revived at batch " + std::to_string(at_a) + " (limit " +
              std::to_string(cfg.revival_age + 1) + "), repeat run " +
              (deterministic ? "identical" : "differs")};
}

Outcome loss_hand_cases() {
  auto s = [](double v) { return torch::full({1}, v, torch::kFloat64); };
  std::vector<double> err;
  err.push_back(std::abs(losses::disc_loss({s(1)}, {s(-1)}).item<double>()));
  err.push_back(
      std::abs(losses::disc_loss({s(0)}, {s(0)}).item<double>() - 2.0));
  err.push_back(std::abs(losses::adv_loss({s(1)}).item<double>()));
  err.push_back(std::abs(losses::adv_loss({s(0)}).item<double>() - 1.0));
  torch::manual_seed(6);
  const losses::FeatureList feats{{torch::randn({3, 5}), torch::randn({7})},
                                  {torch::randn({2, 2})}};
  err.push_back(std::abs(losses::feat_match_loss(feats, feats).item<double>()));
  const losses::LossWeights w{1.0, 45.0, 1.0, 1.0};
  const double base = losses::generator_total(0.3, 0.2, 0.7, 1.1, w);
  err.push_back(std::abs(base - (0.3 + 45.0 * 0.2 + 0.7 + 1.1)));
  err.push_back(std::abs(losses::generator_total(0.6, 0.4, 1.4, 2.2, w) -
                         2.0 * base));
  err.push_back(std::abs(losses::generator_total(0.3, 0.2, 0.7, 1.1, w) +
                         losses::generator_total(1.0, 1.0, 1.0, 1.0, w) -
                         losses::generator_total(1.3, 1.2, 1.7, 2.1, w)));
  const double worst = *std::max_element(err.begin(), err.end());
  return {worst <= 1e-7, "max error " + fmt(worst) + " over " +
                             std::to_string(err.size()) + " cases"};
}

Outcome gradient_check() {
  // x (8 samples) -> latents z [2, 3] -> nearest codes -> linear decoder U, b
  // -> reconstruction y (8 samples). Loss = mel(x, y) + quantizer(z, zq).
  torch::manual_seed(7);
  dsp::MelConfig mc;
  mc.n_mels = 2;
  const dsp::MelTransform mel(dsp::SpectralConfig::hann(8, 2), mc, 24000);
  const auto x = torch::randn({1, 8}, torch::kFloat64);
  const auto book =
      vq::Codebook::from_vectors(torch::randn({5, 3}, torch::kFloat64));
  auto z = torch::randn({2, 3}, torch::kFloat64);
  auto u = torch::randn({8, 6}, torch::kFloat64) * 0.5;
  auto b = torch::randn({8}, torch::kFloat64) * 0.1;
  const auto zq = vq::quantize(z, book).quantized.to(torch::kFloat64);
  auto loss = [&](const torch::Tensor& zz, const torch::Tensor& uu,
                  const torch::Tensor& bb) {
    const auto y = (torch::matmul(uu, zq.reshape({6})) + bb).unsqueeze(0);
    return losses::mel_loss(x, y, mel) + losses::quantizer_loss(zz, zq);
  };
  auto zg = z.clone().requires_grad_(true);
  auto ug = u.clone().requires_grad_(true);
  auto bg = b.clone().requires_grad_(true);
  loss(zg, ug, bg).backward();

  const double h = 1e-6;
  double worst = 0.0;
  std::int64_t checked = 0;
  auto probe = [&](torch::Tensor& p, const torch::Tensor& grad) {
    auto flat = p.view({-1});
    for (std::int64_t i = 0; i < p.numel(); ++i) {
      const double orig = flat[i].item<double>();
      flat[i] = orig + h;
      const double up = loss(z, u, b).item<double>();
      flat[i] = orig - h;
      const double dn = loss(z, u, b).item<double>();
      flat[i] = orig;
      const double fd = (up - dn) / (2 * h);
      const double an = grad.view({-1})[i].item<double>();
      const double scale = std::max({std::abs(fd), std::abs(an), 1e-3});
      worst = std::max(worst, std::abs(fd - an) / scale);
      ++checked;
    }
  };
  probe(z, zg.grad());
  probe(u, ug.grad());
  probe(b, bg.grad());
  return {worst <= 1e-4, "worst relative error " + fmt(worst) + " over " +
                             std::to_string(checked) + " parameters"};
}

Outcome structural_contracts() {
  torch::NoGradGuard no_grad;
  std::vector<std::string> problems;
  std::ostringstream d;
  for (const auto& strides : {std::vector<std::int64_t>{2, 4, 5, 8},
                              std::vector<std::int64_t>{4, 5, 5, 6}}) {
    const auto cfg = ModelConfig::standard(strides);
    Codec codec(cfg);
    codec->eval();
    const auto z = codec->encoder()->forward(torch::randn({1, 24000}) * 0.1);
    const std::int64_t want = 24000 / total_stride(cfg.encoder);
    if (z.size(1) != 512 || z.size(2) != want) {
      problems.push_back("encoder shape");
    }
    const auto& dc = cfg.decoder;
    auto head = codec->decoder()->head();
    const auto split = head->split(torch::zeros({1, 3, dc.n_fft + 2}));
    if (head->channels() != dc.n_fft + 2 ||
        split.magnitude.size(-1) != dc.n_fft / 2 + 1 ||
        split.phase.size(-1) != dc.n_fft / 2 + 1) {
      problems.push_back("head channels");
    }
    const auto audio = codec->decoder()->forward(torch::randn({1, 512, want}));
    if (audio.size(1) != want * dc.hop) problems.push_back("decode length");
    d << z.size(2) << " frames x " << z.size(1) << ", head " << head->channels()
      << ", decoded " << audio.size(1) << "; ";
  }
  DiscriminatorEnsemble ens{DiscriminatorConfig{}};
  if (ens->count() != 16) problems.push_back("ensemble arity");
  d << "K=" << ens->count();
  std::string issues;
  for (const auto& p : problems) issues += " [" + p + "]";
  return {problems.empty(), d.str() + issues};
}

Outcome overfit(const Options& opt) {
  ExperimentConfig cfg;
  cfg.model = ModelConfig::toy();
  use_toy_critics(cfg.discriminators);
  cfg.train.batch_size = 4;
  cfg.train.crop_seconds = 1.0;
  cfg.train.max_clip_seconds = 1.0;
  cfg.train.lr = opt.overfit_lr;
  cfg.train.total_steps = opt.overfit_steps;
  cfg.train.seed = 9;
  const auto clips = testing::synth_corpus(10, 1.0, 500);
  Trainer trainer(cfg, clips);

  auto measure = [&] {
    torch::NoGradGuard no_grad;
    double mel = 0.0, corr = 0.0;
    for (const auto& clip : clips) {
      const auto rec = trainer.codec()->reconstruct(clip);
      const auto n = std::min(rec.size(), clip.size());
      mel += analysis::mel_distance(clip, rec);
      corr += testing::correlation(dsp::to_tensor(clip).narrow(-1, 0, n),
                                   dsp::to_tensor(rec).narrow(-1, 0, n));
    }
    const auto count = static_cast<double>(clips.size());
    return std::make_pair(mel / count, corr / count);
  };

  std::ofstream log;
  if (!opt.artifacts.empty()) {
    trainer.set_metrics_log(opt.artifacts / "overfit_metrics.csv");
  }
  double baseline = 0.0;
  for (std::int64_t s = 0; s < opt.overfit_steps; ++s) {
    const auto [g, d] = trainer.step();
    if (trainer.step_count() == 10) baseline = measure().first;
    if (trainer.step_count() % 100 == 0) {
      std::cerr << "  overfit step " << trainer.step_count() << " mel "
                << g.mel << " disc " << d.disc << std::endl;
    }
  }
  const auto [final_mel, corr] = measure();
  const double drop = baseline > 0 ? 1.0 - final_mel / baseline : 0.0;
  std::ostringstream d;
  d << "mel " << fmt(baseline) << " -> " << fmt(final_mel) << " ("
    << fmt(100 * drop) << "% drop), correlation " << fmt(corr) << ", lr "
    << opt.overfit_lr;
  return {drop > 0.5 && corr > 0.9, d.str()};
}

Outcome bitstream_io() {
  std::mt19937_64 rng(10);
  testing::TempDir dir("accept_bits");
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    TokenStream s;
    s.sample_rate = std::uniform_int_distribution<std::uint32_t>(8000, 48000)(rng);
    s.hop = std::uniform_int_distribution<std::uint16_t>(1, 1024)(rng);
    s.codebook_size =
        std::uniform_int_distribution<std::uint32_t>(2, 65536)(rng);
    const auto frames = std::uniform_int_distribution<int>(0, 3000)(rng);
    std::uniform_int_distribution<std::uint32_t> idx(0, s.codebook_size - 1);
    for (int f = 0; f < frames; ++f) {
      s.indices.push_back(static_cast<std::uint16_t>(idx(rng)));
    }
    const auto path = dir / ("s" + std::to_string(i) + ".tok");
    write_tokens(s, path);
    if (!(read_tokens(path) == s)) ++mismatches;
    if (!(parse_tokens(serialize_tokens(s)) == s)) {
      ++mismatches;
    }
  }

  TokenStream s{24000, 320, 100, {1, 2, 3, 99}};
  auto bytes = serialize_tokens(s);
  auto bad_index = bytes;
  bad_index[kTokenHeaderBytes + 2] = 100;  // low byte of index 1
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  std::ofstream(dir / "index.tok", std::ios::binary) << bad_index;
  std::ofstream(dir / "magic.tok", std::ios::binary) << bad_magic;
  const auto e_index =
      error_of([&] { read_tokens(dir / "index.tok"); });
  const auto e_magic =
      error_of([&] { read_tokens(dir / "magic.tok"); });
  const bool errors_ok =
      e_index == to_string(ErrorCode::kIndexOutOfRange) &&
      e_magic == to_string(ErrorCode::kBadMagic);
  return {mismatches == 0 && errors_ok,
          std::to_string(mismatches) +
              " round-trip mismatches; corrupt index -> " + e_index +
              ", bad magic -> " + e_magic};
}

Outcome ablation_grid(const Options& opt) {
  ExperimentConfig base;
  base.model = ModelConfig::toy();
  use_toy_critics(base.discriminators);
  base.train.batch_size = 2;
  base.train.crop_seconds = 1.0;
  base.train.max_clip_seconds = 5.0;
  base.train.lr = 1e-3;
  base.train.total_steps = opt.ablation_steps;
  base.train.seed = 11;
  const auto corpus = testing::synth_corpus(6, 5.0, 700);
  const auto cells = analysis::standard_grid(base);

  analysis::AblationOptions options;
  options.steps = opt.ablation_steps;
  options.on_cell = [](const analysis::AblationResult& r) {
    std::cerr << "  cell " << r.cell.table << "/" << r.cell.name << ": "
              << r.status << " util " << r.utilization << " mel "
              << r.mel_distance << std::endl;
  };
  const auto results = analysis::run_grid(cells, corpus, options);

  testing::TempDir scratch("accept_grid");
  const auto dir = opt.artifacts.empty() ? scratch.path() : opt.artifacts;
  const auto path = dir / "ablation.csv";
  analysis::write_ablation_csv(results, path);

  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  const auto columns = std::count(header.begin(), header.end(), ',') + 1;
  std::set<std::string> tables;
  int rows = 0, complete = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (static_cast<long>(fields.size()) != columns) continue;
    tables.insert(fields[0]);
    bool filled = fields[8] == "ok";
    for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
      filled = filled && !fields[c].empty();
    }
    complete += filled;
  }
  for (const auto& w : analysis::utilization_trend_warnings(results)) {
    std::cerr << "  note: " << w << std::endl;
  }
  const bool ok = header == analysis::ablation_csv_header() &&
                  rows == static_cast<int>(cells.size()) &&
                  complete == rows && tables.size() == 3;
  return {ok, std::to_string(complete) + "/" + std::to_string(cells.size()) +
                  " complete rows across " + std::to_string(tables.size()) +
                  " tables, " + std::to_string(opt.ablation_steps) +
                  " steps per cell"};
}

Outcome resume_equivalence() {
  ExperimentConfig cfg;
  cfg.model = ModelConfig::toy();
  use_toy_critics(cfg.discriminators);
  cfg.train.batch_size = 2;
  cfg.train.crop_seconds = 0.5;
  cfg.train.max_clip_seconds = 2.0;
  cfg.train.total_steps = 100;
  cfg.train.seed = 12;
  const auto corpus = testing::synth_corpus(4, 2.0, 900);
  constexpr int kSteps = 8, kBreak = 4;
  testing::TempDir dir("accept_resume");

  Trainer full(cfg, corpus);
  losses::LossReport want;
  for (int s = 0; s < kSteps; ++s) {
    want = full.step().first;
    if (s + 1 == kBreak) full.save(dir / "mid.ckpt");
  }
  auto resumed = Trainer::resume(dir / "mid.ckpt", corpus);
  losses::LossReport got;
  for (int s = kBreak; s < kSteps; ++s) got = resumed.step().first;
  const double rel = std::abs(got.total - want.total) /
                     std::max(std::abs(want.total), 1e-12);
  return {rel <= 1e-5, "step-" + std::to_string(kSteps) + " loss " +
                           fmt(want.total) + " vs " + fmt(got.total) +
                           " (relative " + fmt(rel) + ")"};
}

struct Criterion {
  int id;
  std::string group;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace wavtok

int main(int argc, char** argv) {
  using namespace wavtok;
  CLI::App app{"wavtok acceptance suite"};
  std::vector<std::string> groups{"fast"};
  std::vector<int> only;
  Options opt;
  std::string artifacts;
  app.add_option("--group", groups, "fast, overfit, ablation or all")
      ->check(CLI::IsMember({"fast", "overfit", "ablation", "all"}));
  app.add_option("--only", only, "Run these criterion numbers instead");
  app.add_option("--overfit-lr", opt.overfit_lr);
  app.add_option("--overfit-steps", opt.overfit_steps);
  app.add_option("--ablation-steps", opt.ablation_steps);
  app.add_option("--artifacts", artifacts, "Keep logs and CSVs here");
  CLI11_PARSE(app, argc, argv);
  if (!artifacts.empty()) {
    opt.artifacts = artifacts;
    std::filesystem::create_directories(opt.artifacts);
  }
  torch::set_num_threads(1);

  const std::vector<Criterion> criteria{
      {1, "fast", "token rate and bitrate arithmetic", 0.001, token_arithmetic},
      {2, "fast", "stft/istft round trip", 10, stft_round_trip},
      {3, "fast", "quantizer matches brute force", 5, vq_oracle},
      {4, "fast", "EMA closed form", 1, ema_closed_form},
      {5, "fast", "dead-code revival", 1, dead_code_revival},
      {6, "fast", "loss hand cases", 1, loss_hand_cases},
      {7, "fast", "gradient check", 30, gradient_check},
      {8, "fast", "structural contracts", 10, structural_contracts},
      {9, "overfit", "toy overfit", 3 * 3600.0, [&] { return overfit(opt); }},
      {10, "fast", "bitstream", 5, bitstream_io},
      {11, "ablation", "ablation grid", 2 * 3600.0,
       [&] { return ablation_grid(opt); }},
      {12, "fast", "checkpoint resume equivalence", 600, resume_equivalence},
  };

  auto selected = [&](const Criterion& c) {
    if (!only.empty()) return std::count(only.begin(), only.end(), c.id) > 0;
    return std::count(groups.begin(), groups.end(), "all") > 0 ||
           std::count(groups.begin(), groups.end(), c.group) > 0;
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected(c)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = out.pass && in_budget;
    failures += !pass;
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL")
              << "  " << c.title << ": " << out.detail << " [" << fmt(secs)
              << " s" << (in_budget ? "" : ", over budget") << "]"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
