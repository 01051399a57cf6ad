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

#include "wavtok/dsp.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wavtok/error.hpp"

namespace wavtok::dsp {

namespace F = torch::nn::functional;

torch::Tensor hann_window(std::int64_t n, torch::Dtype dtype) {
  return torch::hann_window(n, /*periodic=*/true,
                            torch::TensorOptions().dtype(dtype));
}

SpectralConfig SpectralConfig::hann(std::int64_t n_fft, std::int64_t hop,
                                    Padding padding) {
  SpectralConfig cfg;
  cfg.n_fft = n_fft;
  cfg.hop = hop;
  cfg.window = hann_window(n_fft, torch::kFloat64);
  cfg.padding = padding;
  return cfg;
}

std::int64_t SpectralConfig::pad_amount() const {
  return padding == Padding::kCenter ? n_fft / 2 : (n_fft - hop) / 2;
}

std::int64_t SpectralConfig::frame_count(std::int64_t length) const {
  return padding == Padding::kCenter ? length / hop + 1 : length / hop;
}

torch::Tensor SpectralConfig::window_as(const torch::Tensor& like) const {
  torch::Tensor w =
      window.defined() ? window : hann_window(n_fft, torch::kFloat64);
  auto dtype = like.is_complex()
                   ? (like.scalar_type() == torch::kComplexDouble
                          ? torch::kFloat64
                          : torch::kFloat32)
                   : like.scalar_type();
  return w.to(like.device(), dtype);
}

void SpectralConfig::validate() const {
  check(n_fft >= 2 && n_fft % 2 == 0, ErrorCode::kConfig,
        "n_fft must be even and >= 2, got " + std::to_string(n_fft));
  check(hop > 0 && hop <= n_fft, ErrorCode::kConfig,
        "hop must be in (0, n_fft], got " + std::to_string(hop));
  if (padding == Padding::kSame) {
    check((n_fft - hop) % 2 == 0, ErrorCode::kConfig,
          "same padding requires n_fft - hop to be even");
  }
  torch::Tensor w =
      (window.defined() ? window : hann_window(n_fft, torch::kFloat64))
          .to(torch::kFloat64)
          .contiguous();
  check(w.dim() == 1 && w.size(0) == n_fft, ErrorCode::kConfig,
        "window length must equal n_fft");
  // Squared-window overlap-add envelope over one hop period.
  auto wa = w.accessor<double, 1>();
  double lo = INFINITY, hi = 0.0;
  for (std::int64_t j = 0; j < hop; ++j) {
    double acc = 0.0;
    for (std::int64_t n = j; n < n_fft; n += hop) acc += wa[n] * wa[n];
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
  }
  check(hi > 0.0 && (hi - lo) <= 1e-6 * hi, ErrorCode::kConfig,
        "window does not satisfy the overlap-add condition for hop " +
            std::to_string(hop));
}

torch::Tensor stft(const torch::Tensor& x, const SpectralConfig& cfg) {
  cfg.validate();
  check(x.dim() >= 1 && x.size(-1) >= 1, ErrorCode::kEmptyInput,
        "stft of an empty signal");
  const std::int64_t length = x.size(-1);
  auto lead = x.sizes().slice(0, x.dim() - 1).vec();
  torch::Tensor flat = x.reshape({-1, 1, length});

  const std::int64_t pad = cfg.pad_amount();
  if (pad > 0) {
    // Reflection needs pad < length; very short inputs fall back to zeros.
    if (pad < length) {
      flat = F::pad(flat, F::PadFuncOptions({pad, pad}).mode(torch::kReflect));
    } else {
      flat = F::pad(flat, F::PadFuncOptions({pad, pad}).mode(torch::kConstant));
    }
  }
  const std::int64_t frames = cfg.frame_count(length);
  check(frames >= 1, ErrorCode::kTooShort,
        "signal shorter than one frame");
  torch::Tensor framed =
      flat.squeeze(1).unfold(-1, cfg.n_fft, cfg.hop).narrow(1, 0, frames);
  torch::Tensor spec =
      torch::fft::rfft(framed * cfg.window_as(x), cfg.n_fft, -1);
  lead.push_back(frames);
  lead.push_back(cfg.bins());
  return spec.reshape(lead);
}

torch::Tensor istft(const torch::Tensor& spec, const SpectralConfig& cfg,
                    std::optional<std::int64_t> length) {
  cfg.validate();
  check(spec.dim() >= 2 && spec.size(-1) == cfg.bins(), ErrorCode::kShape,
        "spectrum must have n_fft/2 + 1 bins");
  const std::int64_t frames = spec.size(-2);
  auto lead = spec.sizes().slice(0, spec.dim() - 2).vec();
  const std::int64_t pad = cfg.pad_amount();
  const std::int64_t total = (frames - 1) * cfg.hop + cfg.n_fft;
  const std::int64_t out_len =
      length.value_or(cfg.padding == Padding::kCenter ? (frames - 1) * cfg.hop
                                                      : frames * cfg.hop);
  check(out_len >= 0 && out_len <= total - pad, ErrorCode::kShape,
        "requested length exceeds the synthesized span");

  torch::Tensor flat = spec.reshape({-1, frames, cfg.bins()});
  torch::Tensor window = cfg.window_as(spec);
  torch::Tensor ytmp = torch::fft::irfft(flat, cfg.n_fft, -1) * window;

  auto fold = F::FoldFuncOptions({1, total}, {1, cfg.n_fft})
                  .stride({1, cfg.hop});
  torch::Tensor y = F::fold(ytmp.transpose(1, 2), fold).reshape({-1, total});
  torch::Tensor env =
      F::fold(window.square().reshape({1, cfg.n_fft, 1}).expand(
                  {1, cfg.n_fft, frames}),
              fold)
          .reshape({total});

  y = y.narrow(1, pad, out_len);
  env = env.narrow(0, pad, out_len);
  if (out_len > 0) {
    check(env.min().item<double>() > 1e-11, ErrorCode::kDivisionGuard,
          "window envelope vanishes inside the synthesized span");
  }
  lead.push_back(out_len);
  return (y / env).reshape(lead);
}

ComplexSpectrogram stft(const AudioBuffer& audio, const SpectralConfig& cfg) {
  check(!audio.empty(), ErrorCode::kEmptyInput, "stft of an empty signal");
  return {stft(to_tensor(audio, torch::kFloat64), cfg), cfg};
}

AudioBuffer istft(const ComplexSpectrogram& spec, int sample_rate,
                  std::optional<std::int64_t> length) {
  return to_audio(istft(spec.frames, spec.config, length), sample_rate);
}

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

torch::Tensor mel_filterbank(const MelConfig& mel, std::int64_t n_fft,
                             int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  const double fmax = mel.fmax.value_or(nyquist);
  check(mel.n_mels >= 1, ErrorCode::kConfig, "n_mels must be positive");
  check(fmax <= nyquist, ErrorCode::kConfig,
        "fmax " + std::to_string(fmax) + " exceeds Nyquist " +
            std::to_string(nyquist));
  check(mel.fmin >= 0.0 && mel.fmin < fmax, ErrorCode::kConfig,
        "need 0 <= fmin < fmax");
  check(mel.log_floor > 0.0, ErrorCode::kConfig, "log_floor must be positive");

  const std::int64_t bins = n_fft / 2 + 1;
  const double m_lo = hz_to_mel(mel.fmin), m_hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(mel.n_mels + 2));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                                    static_cast<double>(mel.n_mels + 1));
  }
  torch::Tensor fb = torch::zeros({mel.n_mels, bins}, torch::kFloat64);
  auto a = fb.accessor<double, 2>();
  for (std::int64_t m = 0; m < mel.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    bool nonzero = false;
    for (std::int64_t k = 0; k < bins; ++k) {
      const double f = nyquist * static_cast<double>(k) / (bins - 1);
      const double up = (f - left) / (center - left);
      const double down = (right - f) / (right - center);
      const double w = std::max(0.0, std::min(up, down));
      a[m][k] = w;
      nonzero = nonzero || w > 0.0;
    }
    check(nonzero, ErrorCode::kConfig,
          "mel filter " + std::to_string(m) +
              " covers no frequency bin; reduce n_mels or raise n_fft");
  }
  return fb;
}

MelTransform::MelTransform(SpectralConfig spectral, MelConfig mel,
                           int sample_rate)
    : spectral_(std::move(spectral)),
      mel_(mel),
      sample_rate_(sample_rate),
      filterbank_(mel_filterbank(mel_, spectral_.n_fft, sample_rate)) {
  spectral_.validate();
}

torch::Tensor MelTransform::operator()(const torch::Tensor& x) const {
  torch::Tensor mag = stft(x, spectral_).abs();  // [..., F, bins]
  torch::Tensor mel =
      torch::matmul(filterbank_.to(mag.scalar_type()), mag.transpose(-1, -2));
  return torch::log(torch::clamp_min(mel, mel_.log_floor));
}

torch::Tensor mel_spectrogram(const AudioBuffer& audio,
                              const SpectralConfig& cfg, const MelConfig& mel) {
  check(!audio.empty(), ErrorCode::kEmptyInput, "mel of an empty signal");
  MelTransform transform(cfg, mel, audio.sample_rate());
  return transform(to_tensor(audio, torch::kFloat64));
}

SpectralConfig mel_loss_spectral() { return SpectralConfig::hann(1024, 256); }

MelConfig mel_loss_mel() { return MelConfig{}; }

torch::Tensor to_tensor(const AudioBuffer& audio, torch::Dtype dtype) {
  auto s = audio.samples();
  return torch::from_blob(const_cast<float*>(s.data()),
                          {static_cast<std::int64_t>(s.size())},
                          torch::kFloat32)
      .to(dtype, /*non_blocking=*/false, /*copy=*/true);
}

AudioBuffer to_audio(const torch::Tensor& x, int sample_rate) {
  torch::Tensor flat =
      x.detach().reshape({-1}).to(torch::kFloat32).contiguous();
  const float* p = flat.data_ptr<float>();
  return AudioBuffer(std::vector<float>(p, p + flat.numel()), sample_rate);
}

}  // namespace wavtok::dsp
