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

#include "wavtok/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "wavtok/error.hpp"

namespace wavtok {

void TrainConfig::validate() const {
  check(crop_seconds > 0.0 && crop_seconds <= max_clip_seconds,
        ErrorCode::kConfig, "need 0 < crop_seconds <= max_clip_seconds");
  check(batch_size >= 1, ErrorCode::kConfig, "batch_size must be >= 1");
  check(lr >= 0.0, ErrorCode::kConfig, "lr must be non-negative");
  check(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
        ErrorCode::kConfig, "betas must lie in [0, 1)");
  check(total_steps >= 1, ErrorCode::kConfig, "total_steps must be >= 1");
  check(grad_clip >= 0.0 && disc_warmup_steps >= 0, ErrorCode::kConfig,
        "grad_clip and disc_warmup_steps must be non-negative");
}

void ExperimentConfig::validate() const {
  model.validate();
  discriminators.validate();
  weights.validate();
  train.validate();
}

namespace {

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

void read_activation(const YAML::Node& node, Activation& out) {
  if (node && node["activation"]) {
    out = parse_activation(node["activation"].as<std::string>());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml) {
  ExperimentConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid YAML: ") + e.what());
  }
  try {
    YAML::Node model = root["model"];
    auto& m = cfg.model;
    m.decoder.n_fft = 0;
    read(model, "sample_rate", m.sample_rate);
    YAML::Node enc = model ? model["encoder"] : YAML::Node();
    read(enc, "channels", m.encoder.channels);
    read(enc, "latent_dim", m.encoder.latent_dim);
    read(enc, "strides", m.encoder.strides);
    m.encoder.blocks = static_cast<std::int64_t>(m.encoder.strides.size());
    read(enc, "lstm_layers", m.encoder.lstm_layers);
    read(enc, "lstm_hidden", m.encoder.lstm_hidden);
    read_activation(enc, m.encoder.activation);

    YAML::Node q = model ? model["vq"] : YAML::Node();
    read(q, "codebook_size", m.vq.codebook_size);
    read(q, "ema_decay", m.vq.ema_decay);
    read(q, "revival_age", m.vq.revival_age);
    read(q, "kmeans_init", m.vq.kmeans_init);
    read(q, "kmeans_iters", m.vq.kmeans_iters);
    read(q, "init_buffer_frames", m.vq.init_buffer_frames);
    read(q, "epsilon", m.vq.epsilon);

    YAML::Node dec = model ? model["decoder"] : YAML::Node();
    read(dec, "hidden_dim", m.decoder.hidden_dim);
    read(dec, "attn_heads", m.decoder.attn_heads);
    read(dec, "use_attention", m.decoder.use_attention);
    read(dec, "convnext_depth", m.decoder.convnext_depth);
    read(dec, "convnext_kernel", m.decoder.convnext_kernel);
    read(dec, "convnext_expansion", m.decoder.convnext_expansion);
    read(dec, "n_fft", m.decoder.n_fft);
    read(dec, "magnitude_ceiling", m.decoder.magnitude_ceiling);
    if (dec && dec["variant"]) {
      const auto v = dec["variant"].as<std::string>();
      check(v == "istft" || v == "mirror", ErrorCode::kConfig,
            "decoder variant must be istft or mirror");
      m.decoder.variant =
          v == "istft" ? DecoderVariant::kIstft : DecoderVariant::kMirror;
    }
    m.resolve();

    YAML::Node d = root["discriminators"];
    auto& dc = cfg.discriminators;
    read(d, "periods", dc.periods);
    read(d, "mrd_resolutions", dc.mrd_resolutions);
    read(d, "mrd_bands", dc.mrd_bands);
    read(d, "stft_scales", dc.stft_scales);
    read(d, "mpd_channels", dc.mpd_channels);
    read(d, "mrd_channels", dc.mrd_channels);
    read(d, "stft_channels", dc.stft_channels);
    read(d, "leaky_slope", dc.leaky_slope);
    read(d, "use_mpd", dc.use_mpd);
    read(d, "use_mrd", dc.use_mrd);
    read(d, "use_stft", dc.use_stft);

    YAML::Node l = root["loss"];
    read(l, "lambda_q", cfg.weights.quantizer);
    read(l, "lambda_mel", cfg.weights.mel);
    read(l, "lambda_adv", cfg.weights.adv);
    read(l, "lambda_feat", cfg.weights.feat);

    YAML::Node t = root["train"];
    auto& tc = cfg.train;
    read(t, "crop_seconds", tc.crop_seconds);
    read(t, "max_clip_seconds", tc.max_clip_seconds);
    read(t, "batch_size", tc.batch_size);
    read(t, "lr", tc.lr);
    read(t, "beta1", tc.beta1);
    read(t, "beta2", tc.beta2);
    read(t, "weight_decay", tc.weight_decay);
    read(t, "total_steps", tc.total_steps);
    read(t, "seed", tc.seed);
    read(t, "grad_clip", tc.grad_clip);
    read(t, "disc_warmup_steps", tc.disc_warmup_steps);
    if (t && t["quantizer_reduction"]) {
      const auto r = t["quantizer_reduction"].as<std::string>();
      check(r == "sum" || r == "mean", ErrorCode::kConfig,
            "quantizer_reduction must be sum or mean");
      tc.quantizer_reduction =
          r == "sum" ? losses::Reduction::kSum : losses::Reduction::kMean;
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  check(in.good(), ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_yaml(const ExperimentConfig& cfg) {
  const auto& m = cfg.model;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "sample_rate" << YAML::Value << m.sample_rate;
  e << YAML::Key << "encoder" << YAML::Value << YAML::BeginMap
    << YAML::Key << "channels" << YAML::Value << m.encoder.channels
    << YAML::Key << "latent_dim" << YAML::Value << m.encoder.latent_dim
    << YAML::Key << "strides" << YAML::Value << YAML::Flow << m.encoder.strides
    << YAML::Key << "lstm_layers" << YAML::Value << m.encoder.lstm_layers
    << YAML::Key << "lstm_hidden" << YAML::Value << m.encoder.lstm_hidden
    << YAML::Key << "activation" << YAML::Value << to_string(m.encoder.activation)
    << YAML::EndMap;
  e << YAML::Key << "vq" << YAML::Value << YAML::BeginMap
    << YAML::Key << "codebook_size" << YAML::Value << m.vq.codebook_size
    << YAML::Key << "ema_decay" << YAML::Value << m.vq.ema_decay
    << YAML::Key << "revival_age" << YAML::Value << m.vq.revival_age
    << YAML::Key << "kmeans_init" << YAML::Value << m.vq.kmeans_init
    << YAML::Key << "kmeans_iters" << YAML::Value << m.vq.kmeans_iters
    << YAML::Key << "init_buffer_frames" << YAML::Value << m.vq.init_buffer_frames
    << YAML::Key << "epsilon" << YAML::Value << m.vq.epsilon << YAML::EndMap;
  e << YAML::Key << "decoder" << YAML::Value << YAML::BeginMap
    << YAML::Key << "variant" << YAML::Value
    << (m.decoder.variant == DecoderVariant::kIstft ? "istft" : "mirror")
    << YAML::Key << "hidden_dim" << YAML::Value << m.decoder.hidden_dim
    << YAML::Key << "attn_heads" << YAML::Value << m.decoder.attn_heads
    << YAML::Key << "use_attention" << YAML::Value << m.decoder.use_attention
    << YAML::Key << "convnext_depth" << YAML::Value << m.decoder.convnext_depth
    << YAML::Key << "convnext_kernel" << YAML::Value << m.decoder.convnext_kernel
    << YAML::Key << "convnext_expansion" << YAML::Value
    << m.decoder.convnext_expansion << YAML::Key << "n_fft" << YAML::Value
    << m.decoder.n_fft << YAML::Key << "magnitude_ceiling" << YAML::Value
    << m.decoder.magnitude_ceiling << YAML::EndMap;
  e << YAML::EndMap;

  const auto& d = cfg.discriminators;
  e << YAML::Key << "discriminators" << YAML::Value << YAML::BeginMap
    << YAML::Key << "periods" << YAML::Value << YAML::Flow << d.periods
    << YAML::Key << "mrd_resolutions" << YAML::Value << YAML::Flow
    << d.mrd_resolutions << YAML::Key << "mrd_bands" << YAML::Value
    << YAML::Flow << d.mrd_bands << YAML::Key << "stft_scales" << YAML::Value
    << YAML::Flow << d.stft_scales << YAML::Key << "mpd_channels"
    << YAML::Value << YAML::Flow << d.mpd_channels << YAML::Key
    << "mrd_channels" << YAML::Value << d.mrd_channels << YAML::Key
    << "stft_channels" << YAML::Value << d.stft_channels << YAML::Key
    << "leaky_slope" << YAML::Value << d.leaky_slope << YAML::Key << "use_mpd"
    << YAML::Value << d.use_mpd << YAML::Key << "use_mrd" << YAML::Value
    << d.use_mrd << YAML::Key << "use_stft" << YAML::Value << d.use_stft
    << YAML::EndMap;

  e << YAML::Key << "loss" << YAML::Value << YAML::BeginMap
    << YAML::Key << "lambda_q" << YAML::Value << cfg.weights.quantizer
    << YAML::Key << "lambda_mel" << YAML::Value << cfg.weights.mel
    << YAML::Key << "lambda_adv" << YAML::Value << cfg.weights.adv
    << YAML::Key << "lambda_feat" << YAML::Value << cfg.weights.feat
    << YAML::EndMap;

  const auto& t = cfg.train;
  e << YAML::Key << "train" << YAML::Value << YAML::BeginMap
    << YAML::Key << "crop_seconds" << YAML::Value << t.crop_seconds
    << YAML::Key << "max_clip_seconds" << YAML::Value << t.max_clip_seconds
    << YAML::Key << "batch_size" << YAML::Value << t.batch_size
    << YAML::Key << "lr" << YAML::Value << t.lr << YAML::Key << "beta1"
    << YAML::Value << t.beta1 << YAML::Key << "beta2" << YAML::Value
    << t.beta2 << YAML::Key << "weight_decay" << YAML::Value
    << t.weight_decay << YAML::Key << "total_steps" << YAML::Value
    << t.total_steps << YAML::Key << "seed" << YAML::Value << t.seed
    << YAML::Key << "grad_clip" << YAML::Value << t.grad_clip << YAML::Key
    << "disc_warmup_steps" << YAML::Value << t.disc_warmup_steps << YAML::Key
    << "quantizer_reduction" << YAML::Value
    << (t.quantizer_reduction == losses::Reduction::kSum ? "sum" : "mean")
    << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace wavtok
