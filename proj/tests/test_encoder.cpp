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

#include "support.hpp"
#include "wavtok/encoder.hpp"
#include "wavtok/error.hpp"

namespace wavtok {
namespace {

EncoderConfig narrow(std::vector<std::int64_t> strides) {
  EncoderConfig cfg;
  cfg.channels = 4;
  cfg.latent_dim = 16;
  cfg.strides = std::move(strides);
  cfg.blocks = static_cast<std::int64_t>(cfg.strides.size());
  return cfg;
}

TEST(Encoder, ChannelWidthsDoublePerBlock) {
  EXPECT_EQ(EncoderConfig{}.channel_widths(),
            (std::vector<std::int64_t>{32, 64, 128, 256, 512}));
  EXPECT_EQ(total_stride(EncoderConfig{}), 320);
}

TEST(Encoder, FrameCountIsFloorOfLengthOverStride) {
  torch::manual_seed(0);
  Encoder enc(narrow({2, 4, 5, 8}));
  torch::NoGradGuard no_grad;
  for (std::int64_t len : {320, 321, 639, 640, 4000}) {
    const auto z = enc->forward(torch::randn({2, len}));
    EXPECT_EQ(z.sizes(), (std::vector<std::int64_t>{2, 16, len / 320})) << len;
  }
}

TEST(Encoder, RejectsInputShorterThanOneFrame) {
  Encoder enc(narrow({2, 4, 5, 8}));
  try {
    enc->forward(torch::randn({1, 319}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
  EXPECT_THROW(enc->encode(AudioBuffer({}, 24000)), Error);
}

TEST(Encoder, EncodeReportsFrameRate) {
  Encoder enc(narrow({4, 5, 5, 6}));
  const auto seq = enc->encode(testing::synth_voice(1, 0.5));
  EXPECT_EQ(seq.num_frames(), 20);
  EXPECT_EQ(seq.dim(), 16);
  EXPECT_DOUBLE_EQ(seq.frame_rate, 40.0);
}

TEST(Encoder, GradientsReachEveryParameter) {
  torch::manual_seed(1);
  Encoder enc(narrow({2, 4}));
  enc->forward(torch::randn({2, 64})).square().sum().backward();
  for (const auto& p : enc->named_parameters()) {
    ASSERT_TRUE(p.value().grad().defined()) << p.key();
    EXPECT_GT(p.value().grad().abs().sum().item<double>(), 0.0) << p.key();
  }
}

TEST(Encoder, SeededInitIsDeterministic) {
  torch::manual_seed(9);
  Encoder a(narrow({2, 4}));
  torch::manual_seed(9);
  Encoder b(narrow({2, 4}));
  const auto x = torch::randn({1, 80});
  torch::NoGradGuard no_grad;
  EXPECT_TRUE(torch::equal(a->forward(x), b->forward(x)));
}

TEST(Encoder, ValidateRejectsInconsistentConfig) {
  auto cfg = narrow({2, 4});
  cfg.blocks = 3;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = narrow({2, 0});
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace wavtok
