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

// Training objectives. Critic logit lists are index-aligned across the K
// sub-discriminators; hinges are applied per element and then averaged
// within each logit map.

#pragma once

#include <torch/torch.h>

#include <string>
#include <vector>

#include "wavtok/dsp.hpp"

namespace wavtok::losses {

using LogitList = std::vector<torch::Tensor>;
using FeatureList = std::vector<std::vector<torch::Tensor>>;

struct LossWeights {
  double quantizer = 1.0;
  double mel = 45.0;
  double adv = 1.0;
  double feat = 1.0;

  void validate() const;
};

enum class Reduction { kSum, kMean };

/// (1/K) sum_k [mean relu(1 - D_k(x)) + mean relu(1 + D_k(x~))].
torch::Tensor disc_loss(const LogitList& real_logits,
                        const LogitList& fake_logits);

/// sum over frames of ||z_t - z^_t||^2, or the mean over frames. The target
/// is detached so only the encoder side receives gradients.
torch::Tensor quantizer_loss(const torch::Tensor& z, const torch::Tensor& z_hat,
                             Reduction reduction = Reduction::kSum);

/// Mean absolute difference of the log-mel spectrograms.
torch::Tensor mel_loss(const torch::Tensor& x, const torch::Tensor& x_tilde,
                       const dsp::MelTransform& mel);

/// (1/K) sum_k mean relu(1 - D_k(x~)).
torch::Tensor adv_loss(const LogitList& fake_logits);

/// (1/K) sum_k (1/L_k) sum_l mean |D_k^l(x) - D_k^l(x~)|; real maps are
/// treated as constants.
torch::Tensor feat_match_loss(const FeatureList& real_feats,
                              const FeatureList& fake_feats);

struct GeneratorTerms {
  torch::Tensor quantizer, mel, adv, feat;
};

/// Weighted sum of the four generator terms. Throws kTrainingFault when any
/// term is not finite.
torch::Tensor generator_total(const GeneratorTerms& terms,
                              const LossWeights& weights);
double generator_total(double quantizer, double mel, double adv, double feat,
                       const LossWeights& weights);

struct LossReport {
  enum class Side { kGenerator, kDiscriminator };
  Side side = Side::kGenerator;
  double quantizer = 0.0;
  double mel = 0.0;
  double adv = 0.0;
  double feat = 0.0;
  double disc = 0.0;
  double total = 0.0;

  static std::string csv_header();
  std::string csv_row(long long step) const;
};

}  // namespace wavtok::losses
