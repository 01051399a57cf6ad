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

#include "wavtok/discriminators.hpp"

#include <algorithm>
#include <cmath>

#include "wavtok/error.hpp"

namespace wavtok {

namespace F = torch::nn::functional;

void DiscriminatorConfig::validate() const {
  check(count() >= 1, ErrorCode::kConfig,
        "the ensemble needs at least one sub-discriminator");
  for (auto p : periods) check(p >= 1, ErrorCode::kConfig, "period must be >= 1");
  for (auto n : mrd_resolutions) {
    check(n >= 8 && n % 4 == 0, ErrorCode::kConfig,
          "resolution must be a multiple of 4");
  }
  for (auto n : stft_scales) {
    check(n >= 8 && n % 4 == 0, ErrorCode::kConfig,
          "stft scale must be a multiple of 4");
  }
  check(mrd_bands.size() >= 2 && mrd_bands.front() == 0.0 &&
            mrd_bands.back() == 1.0 &&
            std::is_sorted(mrd_bands.begin(), mrd_bands.end()),
        ErrorCode::kConfig, "bands must rise from 0 to 1");
  check(!mpd_channels.empty() && mrd_channels > 0 && stft_channels > 0,
        ErrorCode::kConfig, "critic channel widths must be positive");
}

std::int64_t DiscriminatorConfig::count() const {
  std::int64_t k = 0;
  if (use_mpd) k += static_cast<std::int64_t>(periods.size());
  if (use_mrd) k += 2 * static_cast<std::int64_t>(mrd_resolutions.size());
  if (use_stft) k += static_cast<std::int64_t>(stft_scales.size());
  return k;
}

std::int64_t DiscriminatorConfig::min_length() const {
  std::int64_t len = 1;
  if (use_mpd && !periods.empty()) {
    len = std::max(len, *std::max_element(periods.begin(), periods.end()));
  }
  if (use_mrd && !mrd_resolutions.empty()) {
    len = std::max(len, *std::max_element(mrd_resolutions.begin(),
                                          mrd_resolutions.end()));
  }
  if (use_stft && !stft_scales.empty()) {
    len = std::max(len,
                   *std::max_element(stft_scales.begin(), stft_scales.end()));
  }
  return len;
}

void CriticOutput::append(CriticResult r) {
  logits.push_back(std::move(r.logits));
  features.push_back(std::move(r.features));
}

torch::Tensor period_reshape(const torch::Tensor& x, std::int64_t period) {
  check(x.dim() == 2, ErrorCode::kShape, "expected [B, T]");
  const std::int64_t t = x.size(1);
  const std::int64_t rem = t % period;
  torch::Tensor h = x.unsqueeze(1);
  if (rem != 0) {
    const std::int64_t pad = period - rem;
    auto mode = pad < t ? F::PadFuncOptions::mode_t(torch::kReflect)
                        : F::PadFuncOptions::mode_t(torch::kConstant);
    h = F::pad(h, F::PadFuncOptions({0, pad}).mode(mode));
  }
  return h.reshape({x.size(0), 1, -1, period});
}

std::vector<std::pair<std::int64_t, std::int64_t>> band_edges(
    std::int64_t bins, const std::vector<double>& fractions) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
    const auto lo = static_cast<std::int64_t>(
        std::floor(fractions[i] * static_cast<double>(bins)));
    const auto hi =
        i + 2 == fractions.size()
            ? bins
            : static_cast<std::int64_t>(
                  std::floor(fractions[i + 1] * static_cast<double>(bins)));
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return out;
}

torch::Tensor amplitude_input(const torch::Tensor& spec) {
  return spec.abs().unsqueeze(1);
}

torch::Tensor complex_input(const torch::Tensor& spec) {
  return torch::stack({torch::real(spec), torch::imag(spec)}, 1);
}

namespace {

WNConv2dOptions conv(std::int64_t in, std::int64_t out,
                     std::array<std::int64_t, 2> kernel,
                     std::array<std::int64_t, 2> stride = {1, 1},
                     std::array<std::int64_t, 2> dilation = {1, 1}) {
  WNConv2dOptions o;
  o.in = in;
  o.out = out;
  o.kernel = kernel;
  o.stride = stride;
  o.dilation = dilation;
  o.padding = {(kernel[0] - 1) * dilation[0] / 2,
               (kernel[1] - 1) * dilation[1] / 2};
  return o;
}

torch::Tensor spectrum(const torch::Tensor& x,
                       const dsp::SpectralConfig& cfg) {
  check(x.dim() == 2, ErrorCode::kShape, "critic expects [B, T]");
  check(x.size(1) >= cfg.n_fft, ErrorCode::kTooShort,
        "input of " + std::to_string(x.size(1)) +
            " samples is shorter than the analysis window " +
            std::to_string(cfg.n_fft));
  return dsp::stft(x, cfg);
}

CriticResult run_stack(std::vector<WNConv2d>& convs, WNConv2d& post,
                       torch::Tensor h, double slope) {
  CriticResult r;
  for (auto& c : convs) {
    h = F::leaky_relu(c(h), F::LeakyReLUFuncOptions().negative_slope(slope));
    r.features.push_back(h);
  }
  r.logits = post(h);
  r.features.push_back(r.logits);
  return r;
}

}  // namespace

PeriodCriticImpl::PeriodCriticImpl(std::int64_t period,
                                   const std::vector<std::int64_t>& channels,
                                   double slope)
    : period_(period), slope_(slope) {
  std::int64_t in = 1;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const bool last = i + 1 == channels.size();
    convs_.push_back(register_module(
        "conv" + std::to_string(i),
        WNConv2d(conv(in, channels[i], {5, 1}, {last ? 1 : 3, 1}))));
    in = channels[i];
  }
  post_ = register_module("post", WNConv2d(conv(in, 1, {3, 1})));
}

CriticResult PeriodCriticImpl::run(const torch::Tensor& x) {
  check(x.size(1) >= period_, ErrorCode::kTooShort,
        "input shorter than the period");
  return run_stack(convs_, post_, period_reshape(x, period_), slope_);
}

std::string PeriodCriticImpl::name() const {
  return "mpd_p" + std::to_string(period_);
}

AmplitudeCriticImpl::AmplitudeCriticImpl(std::int64_t n_fft,
                                         std::int64_t channels, double slope)
    : spectral_(dsp::SpectralConfig::hann(n_fft, n_fft / 4)), slope_(slope) {
  spectral_.window = spectral_.window.to(torch::kFloat32);
  convs_.push_back(
      register_module("conv0", WNConv2d(conv(1, channels, {3, 9}))));
  for (int i = 1; i <= 3; ++i) {
    convs_.push_back(register_module(
        "conv" + std::to_string(i),
        WNConv2d(conv(channels, channels, {3, 9}, {1, 2}))));
  }
  convs_.push_back(
      register_module("conv4", WNConv2d(conv(channels, channels, {3, 3}))));
  post_ = register_module("post", WNConv2d(conv(channels, 1, {3, 3})));
}

CriticResult AmplitudeCriticImpl::run(const torch::Tensor& x) {
  return run_stack(convs_, post_, amplitude_input(spectrum(x, spectral_)),
                   slope_);
}

std::string AmplitudeCriticImpl::name() const {
  return "mrd_amp_" + std::to_string(spectral_.n_fft);
}

MultiBandComplexCriticImpl::MultiBandComplexCriticImpl(
    std::int64_t n_fft, const std::vector<double>& bands,
    std::int64_t channels, double slope)
    : spectral_(dsp::SpectralConfig::hann(n_fft, n_fft / 4)),
      bands_(band_edges(n_fft / 2 + 1, bands)),
      slope_(slope) {
  spectral_.window = spectral_.window.to(torch::kFloat32);
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    std::vector<WNConv2d> stack;
    const std::string prefix = "band" + std::to_string(b) + "_";
    stack.push_back(
        register_module(prefix + "conv0", WNConv2d(conv(2, channels, {3, 9}))));
    for (int i = 1; i <= 3; ++i) {
      stack.push_back(register_module(
          prefix + "conv" + std::to_string(i),
          WNConv2d(conv(channels, channels, {3, 9}, {1, 2}))));
    }
    stack.push_back(register_module(prefix + "conv4",
                                    WNConv2d(conv(channels, channels, {3, 3}))));
    band_convs_.push_back(std::move(stack));
  }
  post_ = register_module("post", WNConv2d(conv(channels, 1, {3, 3})));
}

CriticResult MultiBandComplexCriticImpl::run(const torch::Tensor& x) {
  torch::Tensor input = complex_input(spectrum(x, spectral_));
  std::vector<torch::Tensor> heads;
  std::vector<std::vector<torch::Tensor>> per_layer(band_convs_.front().size());
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    const auto [lo, hi] = bands_[b];
    torch::Tensor h = input.narrow(3, lo, hi - lo);
    for (std::size_t l = 0; l < band_convs_[b].size(); ++l) {
      h = F::leaky_relu(band_convs_[b][l](h),
                        F::LeakyReLUFuncOptions().negative_slope(slope_));
      per_layer[l].push_back(h);
    }
  }
  CriticResult r;
  for (auto& layer : per_layer) r.features.push_back(torch::cat(layer, 3));
  r.logits = post_(r.features.back());
  r.features.push_back(r.logits);
  return r;
}

std::string MultiBandComplexCriticImpl::name() const {
  return "mrd_cplx_" + std::to_string(spectral_.n_fft);
}

StftCriticImpl::StftCriticImpl(std::int64_t n_fft, std::int64_t channels,
                               double slope)
    : spectral_(dsp::SpectralConfig::hann(n_fft, n_fft / 4)), slope_(slope) {
  spectral_.window = spectral_.window.to(torch::kFloat32);
  convs_.push_back(
      register_module("conv0", WNConv2d(conv(2, channels, {3, 9}))));
  const std::int64_t dilations[] = {1, 2, 4};
  for (int i = 0; i < 3; ++i) {
    convs_.push_back(register_module(
        "conv" + std::to_string(i + 1),
        WNConv2d(conv(channels, channels, {3, 9}, {1, 2}, {dilations[i], 1}))));
  }
  convs_.push_back(
      register_module("conv4", WNConv2d(conv(channels, channels, {3, 3}))));
  post_ = register_module("post", WNConv2d(conv(channels, 1, {3, 3})));
}

CriticResult StftCriticImpl::run(const torch::Tensor& x) {
  return run_stack(convs_, post_, complex_input(spectrum(x, spectral_)),
                   slope_);
}

std::string StftCriticImpl::name() const {
  return "stft_" + std::to_string(spectral_.n_fft);
}

DiscriminatorEnsembleImpl::DiscriminatorEnsembleImpl(DiscriminatorConfig cfg)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  auto add = [this](std::shared_ptr<CriticImpl> critic) {
    register_module(critic->name(), critic);
    critics_.push_back(std::move(critic));
  };
  if (cfg_.use_mpd) {
    for (auto p : cfg_.periods) {
      add(std::make_shared<PeriodCriticImpl>(p, cfg_.mpd_channels,
                                             cfg_.leaky_slope));
    }
  }
  mpd_end_ = critics_.size();
  if (cfg_.use_mrd) {
    for (auto n : cfg_.mrd_resolutions) {
      add(std::make_shared<AmplitudeCriticImpl>(n, cfg_.mrd_channels,
                                                cfg_.leaky_slope));
      add(std::make_shared<MultiBandComplexCriticImpl>(
          n, cfg_.mrd_bands, cfg_.mrd_channels, cfg_.leaky_slope));
    }
  }
  mrd_end_ = critics_.size();
  if (cfg_.use_stft) {
    for (auto n : cfg_.stft_scales) {
      add(std::make_shared<StftCriticImpl>(n, cfg_.stft_channels,
                                           cfg_.leaky_slope));
    }
  }
}

CriticOutput DiscriminatorEnsembleImpl::run_range(const torch::Tensor& x,
                                                  std::size_t begin,
                                                  std::size_t end) {
  check(x.dim() == 2, ErrorCode::kShape, "discriminators expect [B, T]");
  CriticOutput out;
  for (std::size_t i = begin; i < end; ++i) out.append(critics_[i]->run(x));
  return out;
}

CriticOutput DiscriminatorEnsembleImpl::forward(const torch::Tensor& x) {
  return run_range(x, 0, critics_.size());
}

CriticOutput DiscriminatorEnsembleImpl::forward_mpd(const torch::Tensor& x) {
  return run_range(x, 0, mpd_end_);
}

CriticOutput DiscriminatorEnsembleImpl::forward_mrd(const torch::Tensor& x) {
  return run_range(x, mpd_end_, mrd_end_);
}

CriticOutput DiscriminatorEnsembleImpl::forward_stft(const torch::Tensor& x) {
  return run_range(x, mrd_end_, critics_.size());
}

std::pair<CriticOutput, CriticOutput> DiscriminatorEnsembleImpl::forward_pair(
    const torch::Tensor& real, const torch::Tensor& fake) {
  check(real.sizes() == fake.sizes(), ErrorCode::kShape,
        "real and fake batches must have the same shape");
  const std::int64_t b = real.size(0);
  CriticOutput both = forward(torch::cat({real, fake}, 0));
  CriticOutput r, f;
  for (std::size_t k = 0; k < both.size(); ++k) {
    r.logits.push_back(both.logits[k].narrow(0, 0, b));
    f.logits.push_back(both.logits[k].narrow(0, b, b));
    std::vector<torch::Tensor> rf, ff;
    for (auto& fm : both.features[k]) {
      rf.push_back(fm.narrow(0, 0, b));
      ff.push_back(fm.narrow(0, b, b));
    }
    r.features.push_back(std::move(rf));
    f.features.push_back(std::move(ff));
  }
  return {std::move(r), std::move(f)};
}

std::vector<std::string> DiscriminatorEnsembleImpl::names() const {
  std::vector<std::string> out;
  for (const auto& c : critics_) out.push_back(c->name());
  return out;
}

}  // namespace wavtok
