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
#include "wavtok/config.hpp"
#include "wavtok/error.hpp"

namespace wavtok {
namespace {

TEST(Config, DefaultsMatchReferenceSetup) {
  const auto cfg = parse_config("{}");
  EXPECT_EQ(cfg.model.sample_rate, 24000);
  EXPECT_EQ(cfg.model.hop(), 320);
  EXPECT_EQ(cfg.model.decoder.n_fft, 1280);
  EXPECT_EQ(cfg.model.vq.codebook_size, 4096);
  EXPECT_EQ(cfg.model.encoder.latent_dim, 512);
  EXPECT_EQ(cfg.discriminators.count(), 16);
  EXPECT_EQ(cfg.weights.mel, 45.0);
  EXPECT_EQ(cfg.train.batch_size, 40);
  EXPECT_EQ(cfg.train.lr, 2e-4);
  EXPECT_EQ(cfg.train.crop_seconds, 3.0);
}

TEST(Config, StridesDriveHopAndHead) {
  const auto cfg = parse_config(R"(
model:
  encoder:
    strides: [4, 5, 5, 6]
  vq:
    codebook_size: 1024
train:
  crop_seconds: 1
)");
  EXPECT_EQ(cfg.model.hop(), 600);
  EXPECT_EQ(cfg.model.decoder.hop, 600);
  EXPECT_EQ(cfg.model.decoder.n_fft, 2400);
  EXPECT_DOUBLE_EQ(cfg.model.token_rate(), 40.0);
  EXPECT_EQ(cfg.model.vq.codebook_size, 1024);
}

TEST(Config, YamlRoundTrip) {
  auto cfg = testing::tiny_experiment();
  cfg.model.decoder.variant = DecoderVariant::kMirror;
  cfg.model.decoder.use_attention = false;
  cfg.discriminators.use_stft = false;
  cfg.weights.feat = 2.5;
  cfg.train.quantizer_reduction = losses::Reduction::kMean;
  cfg.train.seed = 123456789012345ULL;
  const auto text = to_yaml(cfg);
  const auto back = parse_config(text);
  EXPECT_EQ(to_yaml(back), text);
  EXPECT_EQ(back.model.decoder.variant, DecoderVariant::kMirror);
  EXPECT_FALSE(back.model.decoder.use_attention);
  EXPECT_FALSE(back.discriminators.use_stft);
  EXPECT_EQ(back.weights.feat, 2.5);
  EXPECT_EQ(back.train.seed, 123456789012345ULL);
  EXPECT_EQ(back.model.vq.codebook_size, 32);
}

TEST(Config, InvalidValuesAreRejected) {
  auto code = [](const std::string& yaml) {
    try {
      parse_config(yaml);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code("train: {crop_seconds: 12, max_clip_seconds: 10}"),
            ErrorCode::kConfig);
  EXPECT_EQ(code("model: {decoder: {variant: sideways}}"), ErrorCode::kConfig);
  EXPECT_EQ(code("model: {encoder: {channels: many}}"), ErrorCode::kConfig);
  EXPECT_EQ(code("loss: {lambda_mel: -1}"), ErrorCode::kConfig);
  EXPECT_EQ(code("[unbalanced"), ErrorCode::kConfig);
}

TEST(Config, LoadFromFile) {
  testing::TempDir dir("cfg");
  std::ofstream(dir / "c.yaml") << "train:\n  batch_size: 4\n";
  EXPECT_EQ(load_config(dir / "c.yaml").train.batch_size, 4);
  EXPECT_THROW(load_config(dir / "missing.yaml"), Error);
}

}  // namespace
}  // namespace wavtok
