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

#include "wavtok/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numbers>
#include <sstream>

#include "wavtok/error.hpp"
#include "wavtok/vq.hpp"

namespace wavtok {
namespace {

constexpr char kCheckpointMagic[4] = {'W', 'V', 'C', 'K'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  check(in.gcount() == static_cast<std::streamsize>(sizeof(T)),
        ErrorCode::kCorrupt, std::string("checkpoint truncated in ") + what);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

std::string get_block(std::istream& in, const char* what) {
  const auto size = get_le<std::uint64_t>(in, what);
  check(size < (std::uint64_t{1} << 40), ErrorCode::kCorrupt,
        std::string("implausible block size in ") + what);
  std::string block(size, '\0');
  in.read(block.data(), static_cast<std::streamsize>(size));
  check(in.gcount() == static_cast<std::streamsize>(size), ErrorCode::kCorrupt,
        std::string("checkpoint truncated in ") + what);
  return block;
}

struct CheckpointFile {
  ExperimentConfig cfg;
  std::string archive;
};

CheckpointFile read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCode::kIo, "cannot open checkpoint " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  check(in.gcount() == 4 && std::memcmp(magic, kCheckpointMagic, 4) == 0,
        ErrorCode::kCorrupt, "not a checkpoint file: " + path.string());
  const auto version = get_le<std::uint32_t>(in, "header");
  check(version == kCheckpointVersion, ErrorCode::kVersionMismatch,
        "checkpoint version " + std::to_string(version) + ", expected " +
            std::to_string(kCheckpointVersion));
  CheckpointFile file;
  const std::string yaml = get_block(in, "config");
  try {
    file.cfg = parse_config(yaml);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorrupt,
                std::string("checkpoint config unreadable: ") + e.what());
  }
  file.archive = get_block(in, "archive");
  return file;
}

torch::serialize::InputArchive open_archive(const std::string& bytes) {
  torch::serialize::InputArchive archive;
  std::istringstream stream(bytes);
  try {
    archive.load_from(stream);
  } catch (const c10::Error& e) {
    throw Error(ErrorCode::kCorrupt,
                std::string("checkpoint archive unreadable: ") + e.what_without_backtrace());
  }
  return archive;
}

void write_codebook(torch::serialize::OutputArchive& archive,
                    const vq::Codebook& book) {
  archive.write("codebook.vectors", book.vectors);
  archive.write("codebook.ema_cluster_size", book.ema_cluster_size);
  archive.write("codebook.ema_embed_sum", book.ema_embed_sum);
  archive.write("codebook.usage_age", book.usage_age);
}

// libtorch keys optimizer state by tensor address, so its own serializer
// emits records in an address-dependent order. These write AdamW moments in
// parameter order instead, which keeps checkpoints byte-reproducible.
void write_adamw(torch::serialize::OutputArchive& archive,
                 torch::optim::AdamW& opt) {
  std::int64_t index = 0;
  for (auto& group : opt.param_groups()) {
    for (auto& p : group.params()) {
      const std::string key = "p" + std::to_string(index++);
      auto it = opt.state().find(p.unsafeGetTensorImpl());
      if (it == opt.state().end()) continue;
      auto& st = static_cast<torch::optim::AdamWParamState&>(*it->second);
      archive.write(key + ".step", torch::tensor(st.step(), torch::kInt64));
      archive.write(key + ".exp_avg", st.exp_avg());
      archive.write(key + ".exp_avg_sq", st.exp_avg_sq());
      if (st.max_exp_avg_sq().defined()) {
        archive.write(key + ".max_exp_avg_sq", st.max_exp_avg_sq());
      }
    }
  }
}

void read_adamw(torch::serialize::InputArchive& archive,
                torch::optim::AdamW& opt) {
  std::int64_t index = 0;
  for (auto& group : opt.param_groups()) {
    for (auto& p : group.params()) {
      const std::string key = "p" + std::to_string(index++);
      torch::Tensor step;
      if (!archive.try_read(key + ".step", step)) continue;
      auto st = std::make_unique<torch::optim::AdamWParamState>();
      st->step(step.item<std::int64_t>());
      torch::Tensor m, v, vmax;
      archive.read(key + ".exp_avg", m);
      archive.read(key + ".exp_avg_sq", v);
      check(m.sizes() == p.sizes() && v.sizes() == p.sizes(),
            ErrorCode::kCorrupt, "optimizer state shape disagrees with model");
      st->exp_avg(m);
      st->exp_avg_sq(v);
      if (archive.try_read(key + ".max_exp_avg_sq", vmax)) {
        st->max_exp_avg_sq(vmax);
      }
      opt.state()[p.unsafeGetTensorImpl()] = std::move(st);
    }
  }
}

vq::Codebook read_codebook(torch::serialize::InputArchive& archive,
                           const vq::VQConfig& cfg) {
  vq::Codebook book;
  archive.read("codebook.vectors", book.vectors);
  archive.read("codebook.ema_cluster_size", book.ema_cluster_size);
  archive.read("codebook.ema_embed_sum", book.ema_embed_sum);
  archive.read("codebook.usage_age", book.usage_age);
  check(book.vectors.dim() == 2 && book.size() == cfg.codebook_size &&
            book.dim() == cfg.dim,
        ErrorCode::kCorrupt, "codebook shape disagrees with config");
  return book;
}

template <typename Fn>
void guard_archive(Fn&& fn) {
  try {
    fn();
  } catch (const c10::Error& e) {
    throw Error(ErrorCode::kCorrupt,
                std::string("checkpoint content mismatch: ") + e.what_without_backtrace());
  }
}

std::unique_ptr<torch::optim::AdamW> make_adamw(
    std::vector<torch::Tensor> params, const TrainConfig& cfg) {
  return std::make_unique<torch::optim::AdamW>(
      std::move(params), torch::optim::AdamWOptions(cfg.lr)
                             .betas({cfg.beta1, cfg.beta2})
                             .weight_decay(cfg.weight_decay));
}

void set_requires_grad(torch::nn::Module& module, bool flag) {
  for (auto& p : module.parameters()) p.set_requires_grad(flag);
}

}  // namespace

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  check(in.good(), ErrorCode::kIo, "cannot open manifest " + path.string());
  const auto base = path.parent_path();
  DatasetManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    check(!fields.empty() && !fields[0].empty(), ErrorCode::kConfig,
          "manifest line " + std::to_string(line_no) + " has no path");
    ManifestEntry entry;
    entry.path = fields[0];
    if (entry.path.is_relative()) entry.path = base / entry.path;
    if (fields.size() > 1 && !fields[1].empty()) {
      try {
        entry.duration = std::stod(fields[1]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfig,
                    "manifest line " + std::to_string(line_no) +
                        ": bad duration '" + fields[1] + "'");
      }
    }
    if (fields.size() > 2 && !fields[2].empty()) entry.split = fields[2];
    manifest.push_back(std::move(entry));
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  check(out.good(), ErrorCode::kIo, "cannot write manifest " + path.string());
  for (const auto& e : manifest) {
    out << e.path.string() << '\t' << e.duration << '\t' << e.split << '\n';
  }
}

std::vector<AudioBuffer> load_corpus(const DatasetManifest& manifest,
                                     int sample_rate,
                                     const std::optional<std::string>& split) {
  std::vector<AudioBuffer> corpus;
  for (const auto& e : manifest) {
    if (split && e.split != *split) continue;
    corpus.push_back(load_audio(e.path, sample_rate));
  }
  return corpus;
}

double lr_at(std::int64_t step, const TrainConfig& cfg) {
  check(cfg.total_steps > 0 && step >= 0 && step <= cfg.total_steps,
        ErrorCode::kInvalidArgument,
        "step " + std::to_string(step) + " outside [0, " +
            std::to_string(cfg.total_steps) + "]");
  const double progress =
      static_cast<double>(step) / static_cast<double>(cfg.total_steps);
  return cfg.lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

AudioBuffer crop_sample(const AudioBuffer& audio, const TrainConfig& cfg,
                        std::mt19937_64& rng, bool* padded) {
  check(!audio.empty(), ErrorCode::kEmptyInput, "cannot crop empty audio");
  const double sr = audio.sample_rate();
  const auto crop = static_cast<std::size_t>(std::llround(cfg.crop_seconds * sr));
  const auto limit =
      static_cast<std::size_t>(std::llround(cfg.max_clip_seconds * sr));
  const auto& src = audio.samples();
  const std::size_t usable = std::min(src.size(), limit);
  if (padded) *padded = usable < crop;
  std::vector<float> out(crop, 0.0f);
  if (usable <= crop) {
    std::copy_n(src.begin(), usable, out.begin());
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, usable - crop);
    const std::size_t start = pick(rng);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(start), crop,
                out.begin());
  }
  return AudioBuffer(std::move(out), audio.sample_rate());
}

Trainer::Trainer(ExperimentConfig cfg, std::vector<AudioBuffer> corpus)
    : cfg_(std::move(cfg)), corpus_(std::move(corpus)), rng_(cfg_.train.seed) {
  cfg_.model.resolve();
  cfg_.validate();
  check(!corpus_.empty(), ErrorCode::kEmptyInput, "training corpus is empty");
  for (const auto& clip : corpus_) {
    check(clip.sample_rate() == cfg_.model.sample_rate, ErrorCode::kCompatibility,
          "corpus sample rate differs from model rate");
  }
  torch::manual_seed(cfg_.train.seed);
  codec_ = Codec(cfg_.model);
  disc_ = DiscriminatorEnsemble(cfg_.discriminators);
  opt_g_ = make_adamw(codec_->parameters(), cfg_.train);
  opt_d_ = make_adamw(disc_->parameters(), cfg_.train);
  mel_ = std::make_unique<dsp::MelTransform>(
      dsp::mel_loss_spectral(), dsp::mel_loss_mel(), cfg_.model.sample_rate);
  codebook_ready_ = !cfg_.model.vq.kmeans_init;
  const auto crop = std::llround(cfg_.train.crop_seconds * cfg_.model.sample_rate);
  check(crop >= cfg_.model.hop(), ErrorCode::kConfig,
        "crop shorter than one frame");
}

torch::Tensor Trainer::sample_batch() {
  std::uniform_int_distribution<std::size_t> pick(0, corpus_.size() - 1);
  std::vector<torch::Tensor> rows;
  rows.reserve(static_cast<std::size_t>(cfg_.train.batch_size));
  for (std::int64_t b = 0; b < cfg_.train.batch_size; ++b) {
    bool padded = false;
    AudioBuffer crop = crop_sample(corpus_[pick(rng_)], cfg_.train, rng_, &padded);
    if (padded && !warned_padding_) {
      std::cerr << "warning: clip shorter than crop length; zero-padding\n";
      warned_padding_ = true;
    }
    rows.push_back(dsp::to_tensor(crop));
  }
  return torch::stack(rows);
}

void Trainer::initialize_codebook() {
  const std::int64_t wanted = cfg_.model.vq.buffer_frames();
  std::vector<torch::Tensor> chunks;
  std::int64_t have = 0;
  {
    torch::NoGradGuard no_grad;
    while (have < wanted) {
      torch::Tensor z = codec_->encoder()->forward(sample_batch());
      torch::Tensor frames = z.transpose(1, 2).reshape({-1, z.size(1)});
      have += frames.size(0);
      chunks.push_back(frames);
    }
  }
  torch::Tensor buffer = torch::cat(chunks).narrow(0, 0, wanted);
  codec_->codebook() = vq::kmeans_init(buffer, cfg_.model.vq, rng_());
  codebook_ready_ = true;
}

bool Trainer::critics_active() const {
  return disc_->count() > 0 && step_ >= cfg_.train.disc_warmup_steps &&
         (cfg_.weights.adv > 0.0 || cfg_.weights.feat > 0.0);
}

void Trainer::set_learning_rate() {
  const double lr =
      lr_at(std::min(step_, cfg_.train.total_steps), cfg_.train);
  for (auto* opt : {opt_g_.get(), opt_d_.get()}) {
    for (auto& group : opt->param_groups()) {
      static_cast<torch::optim::AdamWOptions&>(group.options()).lr(lr);
    }
  }
}

Trainer::Forward Trainer::generator_forward(const torch::Tensor& batch,
                                            bool straight_through) {
  Forward f;
  torch::Tensor z = codec_->encoder()->forward(batch);  // [B, D, F]
  const auto B = z.size(0), D = z.size(1), F = z.size(2);
  f.latents = z.transpose(1, 2).reshape({B * F, D});
  f.quant = vq::quantize(f.latents.detach(), codec_->codebook());
  torch::Tensor zq = f.quant.quantized.to(f.latents.dtype());
  torch::Tensor dec_in =
      straight_through ? f.latents + (zq - f.latents).detach() : zq;
  dec_in = dec_in.reshape({B, F, D}).transpose(1, 2);
  f.reconstruction = codec_->decoder()->forward(dec_in);
  f.reference = batch.narrow(1, 0, f.reconstruction.size(1));
  return f;
}

losses::GeneratorTerms Trainer::generator_terms(const Forward& f) {
  losses::GeneratorTerms terms;
  terms.quantizer =
      losses::quantizer_loss(f.latents, f.quant.quantized.to(f.latents.dtype()),
                             cfg_.train.quantizer_reduction);
  if (cfg_.train.quantizer_reduction == losses::Reduction::kSum) {
    terms.quantizer =
        terms.quantizer / static_cast<double>(f.reference.size(0));
  }
  terms.mel = losses::mel_loss(f.reference, f.reconstruction, *mel_);
  terms.adv = torch::zeros({}, f.reconstruction.options());
  terms.feat = torch::zeros({}, f.reconstruction.options());
  if (critics_active()) {
    set_requires_grad(*disc_, false);
    auto [real, fake] = disc_->forward_pair(f.reference, f.reconstruction);
    terms.adv = losses::adv_loss(fake.logits);
    terms.feat = losses::feat_match_loss(real.features, fake.features);
    set_requires_grad(*disc_, true);
  }
  return terms;
}

namespace {

losses::LossReport generator_report(const losses::GeneratorTerms& terms) {
  losses::LossReport report;
  report.side = losses::LossReport::Side::kGenerator;
  report.quantizer = terms.quantizer.item<double>();
  report.mel = terms.mel.item<double>();
  report.adv = terms.adv.item<double>();
  report.feat = terms.feat.item<double>();
  return report;
}

}  // namespace

losses::LossReport Trainer::evaluate(const torch::Tensor& batch) {
  if (!codebook_ready_) initialize_codebook();
  torch::NoGradGuard no_grad;
  Forward f = generator_forward(batch, true);
  losses::LossReport report = generator_report(generator_terms(f));
  report.total = losses::generator_total(report.quantizer, report.mel,
                                         report.adv, report.feat, cfg_.weights);
  return report;
}

losses::LossReport Trainer::train_step_g(const torch::Tensor& batch) {
  if (!codebook_ready_) initialize_codebook();
  set_learning_rate();
  codec_->train();
  Forward f = generator_forward(batch, true);
  const losses::GeneratorTerms terms = generator_terms(f);
  losses::LossReport report = generator_report(terms);

  torch::Tensor total;
  try {
    total = losses::generator_total(terms, cfg_.weights);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTrainingFault) throw;
    report.total = std::nan("");
    fault(e.what(), report);
  }
  report.total = total.item<double>();

  opt_g_->zero_grad();
  total.backward();
  if (cfg_.train.grad_clip > 0.0) {
    torch::nn::utils::clip_grad_norm_(codec_->parameters(), cfg_.train.grad_clip);
  }
  opt_g_->step();

  torch::Tensor frames = f.latents.detach();
  vq::Codebook book =
      vq::ema_update(codec_->codebook(), frames, f.quant.indices, cfg_.model.vq);
  codec_->codebook() = vq::revive_dead(book, frames, cfg_.model.vq, rng_());
  const auto hist =
      vq::index_histogram(f.quant.indices, cfg_.model.vq.codebook_size);
  last_utilization_ = vq::utilization_rate(hist);

  log(report);
  return report;
}

losses::LossReport Trainer::train_step_d(const torch::Tensor& batch) {
  losses::LossReport report;
  report.side = losses::LossReport::Side::kDiscriminator;
  if (!critics_active()) {
    log(report);
    return report;
  }
  if (!codebook_ready_) initialize_codebook();
  set_learning_rate();
  torch::Tensor reference, fake;
  {
    torch::NoGradGuard no_grad;
    Forward f = generator_forward(batch, false);
    reference = f.reference;
    fake = f.reconstruction;
  }
  disc_->train();
  auto [real, gen] = disc_->forward_pair(reference, fake);
  torch::Tensor loss = losses::disc_loss(real.logits, gen.logits);
  report.disc = loss.item<double>();
  report.total = report.disc;
  if (!std::isfinite(report.disc)) fault("discriminator loss is not finite", report);

  opt_d_->zero_grad();
  loss.backward();
  if (cfg_.train.grad_clip > 0.0) {
    torch::nn::utils::clip_grad_norm_(disc_->parameters(), cfg_.train.grad_clip);
  }
  opt_d_->step();
  log(report);
  return report;
}

std::pair<losses::LossReport, losses::LossReport> Trainer::step() {
  torch::Tensor batch = sample_batch();
  losses::LossReport g = train_step_g(batch);
  losses::LossReport d = train_step_d(batch);
  ++step_;
  return {g, d};
}

void Trainer::log(const losses::LossReport& report) {
  if (metrics_) {
    *metrics_ << report.csv_row(step_) << '\n';
    metrics_->flush();
  }
}

void Trainer::set_metrics_log(const std::filesystem::path& path) {
  const bool fresh =
      !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  metrics_ = std::make_unique<std::ofstream>(path, std::ios::app);
  check(metrics_->good(), ErrorCode::kIo, "cannot open metrics log " + path.string());
  if (fresh) *metrics_ << losses::LossReport::csv_header() << '\n';
}

void Trainer::fault(const std::string& what, const losses::LossReport& report) {
  const auto dir = fault_dir_.empty() ? std::filesystem::temp_directory_path()
                                      : fault_dir_;
  const auto stem = "wavtok_fault_step" + std::to_string(step_);
  std::string dumped;
  try {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (stem + ".txt"));
    out << "step: " << step_ << "\nreason: " << what << '\n'
        << losses::LossReport::csv_header() << '\n'
        << report.csv_row(step_) << '\n';
    for (const auto& item : codec_->named_parameters()) {
      const auto& p = item.value();
      out << item.key() << " finite=" << p.isfinite().all().item<bool>()
          << " absmax=" << p.detach().abs().max().item<double>() << '\n';
    }
    save(dir / (stem + ".ckpt"));
    dumped = " (diagnostics in " + (dir / stem).string() + ".*)";
  } catch (const std::exception&) {
    dumped = " (diagnostic dump failed)";
  }
  throw Error(ErrorCode::kTrainingFault,
              "training fault at step " + std::to_string(step_) + ": " + what +
                  dumped);
}

void Trainer::save(const std::filesystem::path& path) {
  torch::serialize::OutputArchive archive;
  torch::serialize::OutputArchive codec_ar, disc_ar, opt_g_ar, opt_d_ar;
  codec_->save(codec_ar);
  disc_->save(disc_ar);
  write_adamw(opt_g_ar, *opt_g_);
  write_adamw(opt_d_ar, *opt_d_);
  archive.write("codec", codec_ar);
  archive.write("discriminators", disc_ar);
  archive.write("optimizer_g", opt_g_ar);
  archive.write("optimizer_d", opt_d_ar);
  write_codebook(archive, codec_->codebook());
  archive.write("step", torch::tensor(step_, torch::kInt64));
  archive.write("codebook_ready",
                torch::tensor(static_cast<std::int64_t>(codebook_ready_)));
  std::ostringstream rng_state;
  rng_state << rng_;
  archive.write("rng", c10::IValue(rng_state.str()));

  std::ostringstream blob;
  archive.save_to(blob);
  const std::string yaml = to_yaml(cfg_);
  const std::string bytes = blob.str();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check(out.good(), ErrorCode::kIo, "cannot write checkpoint " + path.string());
  out.write(kCheckpointMagic, 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, yaml.size());
  out << yaml;
  put_le<std::uint64_t>(out, bytes.size());
  out << bytes;
  check(out.good(), ErrorCode::kIo, "short write to " + path.string());
}

Trainer Trainer::resume(const std::filesystem::path& checkpoint,
                        std::vector<AudioBuffer> corpus) {
  CheckpointFile file = read_checkpoint(checkpoint);
  Trainer trainer(file.cfg, std::move(corpus));
  auto archive = open_archive(file.archive);
  guard_archive([&] {
    torch::serialize::InputArchive codec_ar, disc_ar, opt_g_ar, opt_d_ar;
    archive.read("codec", codec_ar);
    archive.read("discriminators", disc_ar);
    archive.read("optimizer_g", opt_g_ar);
    archive.read("optimizer_d", opt_d_ar);
    trainer.codec_->load(codec_ar);
    trainer.disc_->load(disc_ar);
    read_adamw(opt_g_ar, *trainer.opt_g_);
    read_adamw(opt_d_ar, *trainer.opt_d_);
    trainer.codec_->codebook() = read_codebook(archive, trainer.cfg_.model.vq);
    torch::Tensor step, ready;
    archive.read("step", step);
    archive.read("codebook_ready", ready);
    trainer.step_ = step.item<std::int64_t>();
    trainer.codebook_ready_ = ready.item<std::int64_t>() != 0;
    c10::IValue rng_state;
    archive.read("rng", rng_state);
    std::istringstream in(rng_state.toStringRef());
    in >> trainer.rng_;
    check(!in.fail(), ErrorCode::kCorrupt, "sampler state unreadable");
  });
  return trainer;
}

std::pair<Codec, ExperimentConfig> load_codec(
    const std::filesystem::path& checkpoint) {
  CheckpointFile file = read_checkpoint(checkpoint);
  file.cfg.model.resolve();
  Codec codec(file.cfg.model);
  auto archive = open_archive(file.archive);
  guard_archive([&] {
    torch::serialize::InputArchive codec_ar;
    archive.read("codec", codec_ar);
    codec->load(codec_ar);
    codec->codebook() = read_codebook(archive, file.cfg.model.vq);
  });
  codec->eval();
  return {codec, file.cfg};
}

}  // namespace wavtok
