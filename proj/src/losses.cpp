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

#include "wavtok/losses.hpp"

#include <cmath>
#include <sstream>

#include "wavtok/error.hpp"

namespace wavtok::losses {

void LossWeights::validate() const {
  for (double w : {quantizer, mel, adv, feat}) {
    check(std::isfinite(w) && w >= 0.0, ErrorCode::kConfig,
          "loss weights must be finite and non-negative");
  }
}

torch::Tensor disc_loss(const LogitList& real_logits,
                        const LogitList& fake_logits) {
  check(!real_logits.empty() && real_logits.size() == fake_logits.size(),
        ErrorCode::kShape, "real and fake logit lists must align");
  torch::Tensor total = torch::zeros({}, real_logits.front().options());
  for (std::size_t k = 0; k < real_logits.size(); ++k) {
    total = total + torch::relu(1.0 - real_logits[k]).mean() +
            torch::relu(1.0 + fake_logits[k]).mean();
  }
  return total / static_cast<double>(real_logits.size());
}

torch::Tensor quantizer_loss(const torch::Tensor& z, const torch::Tensor& z_hat,
                             Reduction reduction) {
  check(z.sizes() == z_hat.sizes(), ErrorCode::kShape,
        "latent and quantized shapes differ");
  torch::Tensor per_frame = (z - z_hat.detach()).square().sum(-1);
  return reduction == Reduction::kSum ? per_frame.sum() : per_frame.mean();
}

torch::Tensor mel_loss(const torch::Tensor& x, const torch::Tensor& x_tilde,
                       const dsp::MelTransform& mel) {
  check(x.sizes() == x_tilde.sizes(), ErrorCode::kShape,
        "mel loss needs equal-length signals");
  return (mel(x) - mel(x_tilde)).abs().mean();
}

torch::Tensor adv_loss(const LogitList& fake_logits) {
  check(!fake_logits.empty(), ErrorCode::kShape, "no critic logits");
  torch::Tensor total = torch::zeros({}, fake_logits.front().options());
  for (const auto& d : fake_logits) total = total + torch::relu(1.0 - d).mean();
  return total / static_cast<double>(fake_logits.size());
}

torch::Tensor feat_match_loss(const FeatureList& real_feats,
                              const FeatureList& fake_feats) {
  check(!real_feats.empty() && real_feats.size() == fake_feats.size(),
        ErrorCode::kShape, "feature lists must align across critics");
  torch::Tensor total = torch::zeros({}, real_feats.front().front().options());
  for (std::size_t k = 0; k < real_feats.size(); ++k) {
    check(!real_feats[k].empty() && real_feats[k].size() == fake_feats[k].size(),
          ErrorCode::kShape, "feature maps must align within a critic");
    torch::Tensor per_critic = torch::zeros({}, total.options());
    for (std::size_t l = 0; l < real_feats[k].size(); ++l) {
      per_critic = per_critic +
                   (real_feats[k][l].detach() - fake_feats[k][l]).abs().mean();
    }
    total = total + per_critic / static_cast<double>(real_feats[k].size());
  }
  return total / static_cast<double>(real_feats.size());
}

torch::Tensor generator_total(const GeneratorTerms& terms,
                              const LossWeights& weights) {
  weights.validate();
  for (const auto* t : {&terms.quantizer, &terms.mel, &terms.adv, &terms.feat}) {
    check(t->defined() && torch::isfinite(*t).all().item<bool>(),
          ErrorCode::kTrainingFault, "non-finite generator loss term");
  }
  return weights.quantizer * terms.quantizer + weights.mel * terms.mel +
         weights.adv * terms.adv + weights.feat * terms.feat;
}

double generator_total(double quantizer, double mel, double adv, double feat,
                       const LossWeights& weights) {
  weights.validate();
  for (double t : {quantizer, mel, adv, feat}) {
    check(std::isfinite(t), ErrorCode::kTrainingFault,
          "non-finite generator loss term");
  }
  return weights.quantizer * quantizer + weights.mel * mel +
         weights.adv * adv + weights.feat * feat;
}

std::string LossReport::csv_header() {
  return "step,side,quantizer,mel,adv,feat,disc,total";
}

std::string LossReport::csv_row(long long step) const {
  std::ostringstream os;
  os.precision(9);
  os << step << ',' << (side == Side::kGenerator ? "G" : "D") << ','
     << quantizer << ',' << mel << ',' << adv << ',' << feat << ',' << disc
     << ',' << total;
  return os.str();
}

}  // namespace wavtok::losses
