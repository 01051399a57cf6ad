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

#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"
#include "wavtok/analysis.hpp"
#include "wavtok/dsp.hpp"
#include "wavtok/error.hpp"
#include "wavtok/losses.hpp"

namespace wavtok {
namespace {

std::vector<std::string> lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Analysis, EntropyOfUniformAndPointMass) {
  std::vector<std::int64_t> uniform(4096, 3);
  const auto r = analysis::UtilizationReport::from_histogram(uniform, "u");
  EXPECT_DOUBLE_EQ(r.utilization, 1.0);
  EXPECT_NEAR(r.entropy, 12.0, 1e-12);
  EXPECT_EQ(r.total_frames(), 3 * 4096);
  std::vector<std::int64_t> point(4096, 0);
  point[17] = 100;
  const auto p = analysis::UtilizationReport::from_histogram(point);
  EXPECT_DOUBLE_EQ(p.utilization, 1.0 / 4096.0);
  EXPECT_EQ(p.entropy, 0.0);
}

TEST(Analysis, EntropyNeverExceedsLogV) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::int64_t> h(64);
    for (auto& c : h) c = std::uniform_int_distribution<int>(0, 9)(rng);
    h[0] += 1;
    EXPECT_LE(analysis::entropy_bits(h), 6.0 + 1e-12);
  }
}

TEST(Analysis, IndexDistributionCountsEveryFrame) {
  torch::manual_seed(2);
  Codec codec(testing::tiny_experiment().model);
  const auto corpus = testing::synth_corpus(3, 0.5);
  const auto r = analysis::index_distribution(codec, corpus, "toy");
  EXPECT_EQ(r.total_frames(), 3 * (12000 / 320));
  EXPECT_EQ(r.histogram.size(), 32u);
  EXPECT_EQ(r.dataset, "toy");
  const auto again = analysis::index_distribution(codec, corpus, "toy");
  EXPECT_EQ(again.histogram, r.histogram);
  EXPECT_THROW(analysis::index_distribution(codec, std::vector<AudioBuffer>{}),
               Error);

  testing::TempDir dir("dist");
  analysis::write_distribution_csv(r, dir / "d.csv");
  const auto l = lines(dir / "d.csv");
  ASSERT_EQ(l.size(), 33u);
  EXPECT_EQ(l[0], "index,count,probability");
  EXPECT_EQ(l[1].substr(0, 2), "0,");
}

TEST(Analysis, MelDistanceEval) {
  testing::TempDir ref("ref"), deg("deg");
  for (int i = 0; i < 3; ++i) {
    const auto clip = testing::synth_voice(10 + i, 0.5);
    write_wav(ref / ("c" + std::to_string(i) + ".wav"), clip,
              WavEncoding::kFloat32);
    write_wav(deg / ("c" + std::to_string(i) + ".wav"), clip,
              WavEncoding::kFloat32);
  }
  write_wav(ref / "lonely.wav", testing::synth_voice(20, 0.5));
  const auto same = analysis::mel_distance_eval(ref.path(), deg.path());
  ASSERT_EQ(same.rows.size(), 3u);
  EXPECT_EQ(same.skipped, std::vector<std::string>{"lonely.wav"});
  for (const auto& r : same.rows) EXPECT_EQ(r.distance, 0.0);

  const AudioBuffer silence(std::vector<float>(12000, 0.0f), 24000);
  write_wav(deg / "c1.wav", silence, WavEncoding::kFloat32);
  const auto fwd = analysis::mel_distance_eval(ref.path(), deg.path());
  const auto bwd = analysis::mel_distance_eval(deg.path(), ref.path());
  EXPECT_GT(fwd.rows[1].distance, 0.0);
  EXPECT_DOUBLE_EQ(fwd.rows[1].distance, bwd.rows[1].distance);
  const dsp::MelTransform mel(dsp::mel_loss_spectral(), dsp::mel_loss_mel(),
                              24000);
  const auto x = dsp::to_tensor(read_wav(ref / "c1.wav")).unsqueeze(0);
  const double direct =
      losses::mel_loss(x, torch::zeros_like(x), mel).item<double>();
  EXPECT_DOUBLE_EQ(fwd.rows[1].distance, direct);
  EXPECT_NEAR(fwd.mean, direct / 3.0, 1e-12);

  analysis::write_mel_distance_csv(fwd, ref / "out.csv");
  const auto l = lines(ref / "out.csv");
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "file,mel_distance");
  EXPECT_EQ(l[4].substr(0, 5), "mean,");
  EXPECT_EQ(l[5].substr(0, 4), "std,");
}

TEST(Analysis, GridShapes) {
  const auto base = testing::tiny_experiment();
  const auto product = analysis::product_grid(base, {1024, 4096}, {1.0, 3.0});
  EXPECT_EQ(product.size(), 4u);
  const auto grid = analysis::standard_grid(base);
  ASSERT_EQ(grid.size(), 11u);
  int codebook = 0, context = 0, components = 0;
  for (const auto& c : grid) {
    codebook += c.table == "codebook";
    context += c.table == "context";
    components += c.table == "components";
  }
  EXPECT_EQ(codebook, 4);
  EXPECT_EQ(context, 3);
  EXPECT_EQ(components, 4);
  const auto& no_attn = grid[9];
  EXPECT_EQ(no_attn.name, "no_attention");
  EXPECT_FALSE(no_attn.config.model.decoder.use_attention);
  Decoder dec(no_attn.config.model.decoder);
  EXPECT_FALSE(dec->has_attention());
  EXPECT_FALSE(grid[10].config.discriminators.use_stft);
  EXPECT_EQ(grid[8].config.model.decoder.variant, DecoderVariant::kMirror);
}

TEST(Analysis, GridRunRecordsFailuresAndWritesCsv) {
  auto base = testing::tiny_experiment();
  auto cells = analysis::product_grid(base, {16, 32}, {0.25});
  cells.push_back(cells.front());
  cells.back().name = "broken";
  cells.back().config.train.crop_seconds = 0.001;  // shorter than a frame
  analysis::AblationOptions opts;
  opts.steps = 2;
  int seen = 0;
  opts.on_cell = [&](const analysis::AblationResult&) { ++seen; };
  const auto results =
      analysis::run_grid(cells, testing::synth_corpus(2, 0.5), opts);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(seen, 3);
  EXPECT_EQ(results[0].status, "ok");
  EXPECT_EQ(results[0].steps, 2);
  EXPECT_GT(results[0].utilization, 0.0);
  EXPECT_GT(results[0].mel_distance, 0.0);
  EXPECT_EQ(results[2].status.substr(0, 7), "failed:");

  testing::TempDir dir("grid");
  analysis::write_ablation_csv(results, dir / "g.csv");
  const auto l = lines(dir / "g.csv");
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], analysis::ablation_csv_header());
  for (std::size_t i = 1; i < l.size(); ++i) {
    EXPECT_EQ(std::count(l[i].begin(), l[i].end(), ','), 11) << l[i];
  }
}

TEST(Analysis, TrendWarnings) {
  analysis::AblationResult small, large;
  small.status = large.status = "ok";
  small.cell.config.model.vq.codebook_size = 1024;
  large.cell.config.model.vq.codebook_size = 16384;
  small.utilization = 0.2;
  large.utilization = 0.5;
  EXPECT_EQ(analysis::utilization_trend_warnings({small, large}).size(), 1u);
  small.utilization = 0.9;
  EXPECT_TRUE(analysis::utilization_trend_warnings({small, large}).empty());
}

}  // namespace
}  // namespace wavtok
