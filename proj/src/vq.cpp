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

#include "wavtok/vq.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <string>

#include "wavtok/error.hpp"

namespace wavtok::vq {

namespace {

constexpr std::int64_t kDistanceChunk = 1024;

torch::Tensor as_frames(const torch::Tensor& latents, std::int64_t dim) {
  check(latents.dim() == 2 && latents.size(1) == dim, ErrorCode::kShape,
        "latents must be [T, " + std::to_string(dim) + "]");
  return latents.detach().to(torch::kFloat64);
}

// Squared distances [T, V] via the expanded form, computed in double.
torch::Tensor pairwise_sq_dist(const torch::Tensor& z, const torch::Tensor& e,
                               const torch::Tensor& e_sq) {
  return (z.square().sum(1, true) - 2.0 * torch::matmul(z, e.t()) +
          e_sq.unsqueeze(0))
      .clamp_min(0.0);
}

torch::Tensor nearest(const torch::Tensor& z, const torch::Tensor& e) {
  torch::Tensor e_sq = e.square().sum(1);
  std::vector<torch::Tensor> parts;
  for (std::int64_t start = 0; start < z.size(0); start += kDistanceChunk) {
    const auto len = std::min(kDistanceChunk, z.size(0) - start);
    parts.push_back(
        pairwise_sq_dist(z.narrow(0, start, len), e, e_sq).argmin(1));
  }
  if (parts.empty()) return torch::empty({0}, torch::kInt64);
  return torch::cat(parts);
}

}  // namespace

void VQConfig::validate() const {
  check(codebook_size >= 1, ErrorCode::kConfig, "codebook_size must be >= 1");
  check(dim >= 1, ErrorCode::kConfig, "codebook dim must be >= 1");
  check(ema_decay > 0.0 && ema_decay < 1.0, ErrorCode::kConfig,
        "ema_decay must lie in (0, 1)");
  check(revival_age >= 0, ErrorCode::kConfig, "revival_age must be >= 0");
  check(kmeans_iters >= 0, ErrorCode::kConfig, "kmeans_iters must be >= 0");
  check(epsilon > 0.0, ErrorCode::kConfig, "epsilon must be positive");
}

Codebook Codebook::clone() const {
  return {vectors.clone(), ema_cluster_size.clone(), ema_embed_sum.clone(),
          usage_age.clone()};
}

Codebook Codebook::from_vectors(const torch::Tensor& vectors) {
  check(vectors.dim() == 2 && vectors.size(0) >= 1, ErrorCode::kShape,
        "codebook vectors must be [V, D] with V >= 1");
  torch::Tensor v = vectors.detach().to(torch::kFloat64).clone();
  return {v, torch::ones({v.size(0)}, torch::kFloat64), v.clone(),
          torch::zeros({v.size(0)}, torch::kInt64)};
}

Codebook kmeans_init(const torch::Tensor& buffer, const VQConfig& cfg,
                     std::uint64_t seed) {
  cfg.validate();
  torch::NoGradGuard no_grad;
  torch::Tensor x = as_frames(buffer, cfg.dim);
  const std::int64_t n = x.size(0);
  const std::int64_t k = cfg.codebook_size;
  check(n >= k, ErrorCode::kInsufficientInitData,
        "k-means needs at least " + std::to_string(k) + " frames, got " +
            std::to_string(n));

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  torch::Tensor centers = torch::empty({k, cfg.dim}, torch::kFloat64);
  std::int64_t first =
      std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
  centers[0] = x[first];
  torch::Tensor min_d = (x - x[first]).square().sum(1);
  for (std::int64_t c = 1; c < k; ++c) {
    const double total = min_d.sum().item<double>();
    std::int64_t pick;
    if (total <= 0.0) {
      pick = std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
    } else {
      const double r =
          std::uniform_real_distribution<double>(0.0, total)(rng);
      torch::Tensor cum = min_d.cumsum(0);
      pick = std::min<std::int64_t>(
          n - 1, torch::searchsorted(cum, torch::tensor({r}, torch::kFloat64),
                                     /*out_int32=*/false, /*right=*/true)
                     .item<std::int64_t>());
    }
    centers[c] = x[pick];
    min_d = torch::minimum(min_d, (x - x[pick]).square().sum(1));
  }

  torch::Tensor assign = nearest(x, centers);
  for (std::int64_t it = 0; it < cfg.kmeans_iters; ++it) {
    torch::Tensor counts =
        torch::bincount(assign, /*weights=*/{}, k).to(torch::kFloat64);
    torch::Tensor sums =
        torch::zeros({k, cfg.dim}, torch::kFloat64).index_add_(0, assign, x);
    torch::Tensor filled = counts > 0;
    // Empty clusters keep their previous centroid.
    centers = torch::where(filled.unsqueeze(1),
                           sums / counts.clamp_min(1.0).unsqueeze(1), centers);
    torch::Tensor next = nearest(x, centers);
    const bool converged = next.equal(assign);
    assign = next;
    if (converged) break;
  }
  torch::Tensor population =
      torch::bincount(assign, /*weights=*/{}, k).to(torch::kFloat64);
  return {centers, population, centers * population.unsqueeze(1),
          torch::zeros({k}, torch::kInt64)};
}

QuantizationResult quantize(const torch::Tensor& latents,
                            const Codebook& book) {
  torch::NoGradGuard no_grad;
  torch::Tensor z = as_frames(latents, book.dim());
  torch::Tensor idx = nearest(z, book.vectors);
  torch::Tensor q = book.vectors.index_select(0, idx);
  torch::Tensor dist = (z - q).square().sum(1);
  return {idx, q.to(latents.scalar_type()), dist};
}

QuantizationResult quantize(const LatentSequence& latents,
                            const Codebook& book) {
  return quantize(latents.frames, book);
}

torch::Tensor lookup(const Codebook& book, const torch::Tensor& indices) {
  check(indices.dim() == 1, ErrorCode::kShape, "indices must be 1-D");
  if (indices.numel() > 0) {
    check(indices.min().item<std::int64_t>() >= 0 &&
              indices.max().item<std::int64_t>() < book.size(),
          ErrorCode::kIndexOutOfRange, "code index outside the codebook");
  }
  return book.vectors.index_select(0, indices.to(torch::kInt64))
      .to(torch::kFloat32);
}

Codebook ema_update(const Codebook& book, const torch::Tensor& latents,
                    const torch::Tensor& indices, const VQConfig& cfg) {
  torch::NoGradGuard no_grad;
  torch::Tensor z = as_frames(latents, book.dim());
  check(indices.dim() == 1 && indices.size(0) == z.size(0), ErrorCode::kShape,
        "one assignment per latent frame required");
  const std::int64_t v = book.size();
  const double gamma = cfg.ema_decay;
  torch::Tensor idx = indices.to(torch::kInt64);
  torch::Tensor counts =
      torch::bincount(idx, /*weights=*/{}, v).to(torch::kFloat64);
  torch::Tensor sums =
      torch::zeros({v, book.dim()}, torch::kFloat64).index_add_(0, idx, z);

  Codebook out = book.clone();
  out.ema_cluster_size = gamma * book.ema_cluster_size + (1.0 - gamma) * counts;
  out.ema_embed_sum = gamma * book.ema_embed_sum + (1.0 - gamma) * sums;
  const double total = out.ema_cluster_size.sum().item<double>();
  torch::Tensor smoothed = (out.ema_cluster_size + cfg.epsilon) /
                           (total + static_cast<double>(v) * cfg.epsilon) *
                           total;
  torch::Tensor assigned = counts > 0;
  out.vectors = torch::where(assigned.unsqueeze(1),
                             out.ema_embed_sum / smoothed.unsqueeze(1),
                             book.vectors);
  out.usage_age = torch::where(assigned, torch::zeros_like(book.usage_age),
                               book.usage_age + 1);
  return out;
}

Codebook revive_dead(const Codebook& book, const torch::Tensor& batch,
                     const VQConfig& cfg, std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  torch::Tensor x = as_frames(batch, book.dim());
  check(x.size(0) >= 1, ErrorCode::kEmptyInput,
        "revival needs a nonempty batch");
  Codebook out = book.clone();
  torch::Tensor dead =
      (book.usage_age > cfg.revival_age).nonzero().reshape({-1});
  if (dead.numel() == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(0, x.size(0) - 1);
  auto dead_a = dead.accessor<std::int64_t, 1>();
  for (std::int64_t i = 0; i < dead.size(0); ++i) {
    const std::int64_t code = dead_a[i];
    torch::Tensor frame = x[pick(rng)];
    out.vectors[code] = frame;
    out.ema_embed_sum[code] = frame;
    out.ema_cluster_size[code] = 1.0;
    out.usage_age[code] = 0;
  }
  return out;
}

std::vector<std::int64_t> index_histogram(const torch::Tensor& indices,
                                          std::int64_t codebook_size) {
  check(codebook_size >= 1, ErrorCode::kInvalidArgument,
        "codebook size must be >= 1");
  std::vector<std::int64_t> hist(static_cast<std::size_t>(codebook_size), 0);
  torch::Tensor flat = indices.reshape({-1}).to(torch::kInt64).contiguous();
  const std::int64_t* p = flat.data_ptr<std::int64_t>();
  for (std::int64_t i = 0; i < flat.numel(); ++i) {
    check(p[i] >= 0 && p[i] < codebook_size, ErrorCode::kIndexOutOfRange,
          "index " + std::to_string(p[i]) + " outside codebook");
    ++hist[static_cast<std::size_t>(p[i])];
  }
  return hist;
}

double utilization_rate(std::span<const std::int64_t> histogram) {
  check(!histogram.empty(), ErrorCode::kInvalidArgument,
        "utilization of an empty codebook");
  std::int64_t used = 0;
  for (auto c : histogram) {
    check(c >= 0, ErrorCode::kInvalidArgument, "negative count");
    used += c > 0 ? 1 : 0;
  }
  return static_cast<double>(used) / static_cast<double>(histogram.size());
}

void export_codebook_csv(const Codebook& book,
                         std::span<const std::int64_t> histogram,
                         const std::filesystem::path& path) {
  check(static_cast<std::int64_t>(histogram.size()) == book.size(),
        ErrorCode::kShape, "histogram length must equal codebook size");
  std::ofstream os(path);
  check(os.good(), ErrorCode::kIo, "cannot write " + path.string());
  os << "index,count,usage_age";
  for (std::int64_t d = 0; d < book.dim(); ++d) os << ",v" << d;
  os << '\n' << std::setprecision(9);
  torch::Tensor vec = book.vectors.contiguous();
  auto va = vec.accessor<double, 2>();
  auto age = book.usage_age.contiguous();
  auto aa = age.accessor<std::int64_t, 1>();
  for (std::int64_t v = 0; v < book.size(); ++v) {
    os << v << ',' << histogram[static_cast<std::size_t>(v)] << ',' << aa[v];
    for (std::int64_t d = 0; d < book.dim(); ++d) os << ',' << va[v][d];
    os << '\n';
  }
}

}  // namespace wavtok::vq
