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

#include "wavtok/bitstream.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wavtok/error.hpp"

namespace wavtok {
namespace {

constexpr char kMagic[4] = {'W', 'V', 'T', 'K'};

template <typename T>
void put(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
  check(pos + sizeof(T) <= in.size(), ErrorCode::kTruncated,
        "token stream truncated in header");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  return value;
}

}  // namespace

double token_rate(int sample_rate, std::int64_t total_stride) {
  check(sample_rate > 0 && total_stride > 0, ErrorCode::kInvalidArgument,
        "sample rate and stride must be positive");
  return static_cast<double>(sample_rate) / static_cast<double>(total_stride);
}

double bitrate(double rate, std::int64_t codebook_size) {
  check(codebook_size >= 2, ErrorCode::kInvalidArgument,
        "codebook needs at least two entries");
  check(rate > 0.0, ErrorCode::kInvalidArgument, "token rate must be positive");
  return rate * std::log2(static_cast<double>(codebook_size)) / 1000.0;
}

double TokenStream::duration_seconds() const {
  return static_cast<double>(frames()) * hop / sample_rate;
}

void TokenStream::validate() const {
  check(sample_rate > 0 && hop > 0, ErrorCode::kInvalidArgument,
        "token stream needs a sample rate and hop");
  check(codebook_size >= 2 && codebook_size <= kMaxCodebookSize,
        ErrorCode::kInvalidArgument,
        "codebook size " + std::to_string(codebook_size) + " not in [2, 65536]");
  for (std::size_t t = 0; t < indices.size(); ++t) {
    check(indices[t] < codebook_size, ErrorCode::kIndexOutOfRange,
          "index " + std::to_string(indices[t]) + " at frame " +
              std::to_string(t) + " >= " + std::to_string(codebook_size));
  }
}

std::string serialize_tokens(const TokenStream& stream) {
  stream.validate();
  std::string out(kMagic, 4);
  out.reserve(kTokenHeaderBytes + 2 * stream.indices.size());
  put<std::uint8_t>(out, kTokenFormatVersion);
  put<std::uint32_t>(out, stream.sample_rate);
  put<std::uint16_t>(out, stream.hop);
  put<std::uint32_t>(out, stream.codebook_size);
  put<std::uint64_t>(out, stream.frames());
  for (auto idx : stream.indices) put<std::uint16_t>(out, idx);
  return out;
}

TokenStream parse_tokens(const std::string& bytes) {
  check(bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0,
        ErrorCode::kBadMagic, "not a token stream (bad magic)");
  std::size_t pos = 4;
  const auto version = get<std::uint8_t>(bytes, pos);
  check(version == kTokenFormatVersion, ErrorCode::kVersionMismatch,
        "token format version " + std::to_string(version) + " unsupported");
  TokenStream s;
  s.sample_rate = get<std::uint32_t>(bytes, pos);
  s.hop = get<std::uint16_t>(bytes, pos);
  s.codebook_size = get<std::uint32_t>(bytes, pos);
  const auto frames = get<std::uint64_t>(bytes, pos);
  const std::size_t available = (bytes.size() - pos) / 2;
  check(frames <= available, ErrorCode::kTruncated,
        "token payload holds " + std::to_string(available) + " of " +
            std::to_string(frames) + " frames");
  check(bytes.size() - pos == 2 * frames, ErrorCode::kCorrupt,
        "trailing bytes after token payload");
  s.indices.resize(frames);
  for (auto& idx : s.indices) idx = get<std::uint16_t>(bytes, pos);
  s.validate();
  return s;
}

void write_tokens(const TokenStream& stream, const std::filesystem::path& path) {
  const std::string bytes = serialize_tokens(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  check(out.good(), ErrorCode::kIo, "short write to " + path.string());
}

TokenStream read_tokens(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return parse_tokens(bytes);
}

TokenStream encode_audio(const AudioBuffer& audio, Codec& codec) {
  const auto& cfg = codec->config();
  check(cfg.vq.codebook_size <= kMaxCodebookSize, ErrorCode::kCompatibility,
        "codebook too large for the token format");
  check(cfg.hop() <= 0xFFFF, ErrorCode::kCompatibility,
        "hop too large for the token format");
  torch::Tensor idx = codec->encode_indices(audio).to(torch::kInt64).contiguous();
  TokenStream s;
  s.sample_rate = static_cast<std::uint32_t>(cfg.sample_rate);
  s.hop = static_cast<std::uint16_t>(cfg.hop());
  s.codebook_size = static_cast<std::uint32_t>(cfg.vq.codebook_size);
  s.indices.reserve(static_cast<std::size_t>(idx.numel()));
  const auto* p = idx.data_ptr<std::int64_t>();
  for (std::int64_t t = 0; t < idx.numel(); ++t) {
    s.indices.push_back(static_cast<std::uint16_t>(p[t]));
  }
  s.validate();
  return s;
}

AudioBuffer decode_tokens(const TokenStream& stream, Codec& codec) {
  stream.validate();
  const auto& cfg = codec->config();
  check(stream.sample_rate == static_cast<std::uint32_t>(cfg.sample_rate) &&
            stream.hop == cfg.hop() &&
            stream.codebook_size == cfg.vq.codebook_size,
        ErrorCode::kCompatibility,
        "token header (sr " + std::to_string(stream.sample_rate) + ", hop " +
            std::to_string(stream.hop) + ", V " +
            std::to_string(stream.codebook_size) + ") does not match model");
  check(!stream.indices.empty(), ErrorCode::kEmptyInput, "token stream is empty");
  std::vector<std::int64_t> idx(stream.indices.begin(), stream.indices.end());
  return codec->decode_indices(torch::tensor(idx, torch::kInt64));
}

TokenStream encode_file(const std::filesystem::path& audio_path, Codec& codec) {
  return encode_audio(load_audio(audio_path, codec->config().sample_rate), codec);
}

void decode_file(const TokenStream& stream, Codec& codec,
                 const std::filesystem::path& audio_path) {
  write_wav(audio_path, decode_tokens(stream, codec), WavEncoding::kPcm16);
}

}  // namespace wavtok
