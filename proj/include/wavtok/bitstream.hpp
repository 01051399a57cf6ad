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

// Token file format. Layout, all little-endian:
//
//   magic "WVTK" | version u8 | sample_rate u32 | hop u16 | V u32 |
//   frames u64 | frames x index u16
//
// Version 1 stores each index in two bytes, which bounds V at 65536.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wavtok/audio.hpp"
#include "wavtok/codec.hpp"

namespace wavtok {

inline constexpr std::uint8_t kTokenFormatVersion = 1;
inline constexpr std::size_t kTokenHeaderBytes = 23;
inline constexpr std::uint32_t kMaxCodebookSize = 65536;

/// Tokens per second; non-divisible pairs give a fractional rate.
double token_rate(int sample_rate, std::int64_t total_stride);
/// kbps = token_rate * log2(V) / 1000. Throws kInvalidArgument for V < 2.
double bitrate(double token_rate, std::int64_t codebook_size);

struct TokenStream {
  std::uint32_t sample_rate = 0;
  std::uint16_t hop = 0;
  std::uint32_t codebook_size = 0;
  std::vector<std::uint16_t> indices;

  std::uint64_t frames() const { return indices.size(); }
  double duration_seconds() const;
  void validate() const;
  bool operator==(const TokenStream&) const = default;
};

std::string serialize_tokens(const TokenStream& stream);
/// Throws kBadMagic, kVersionMismatch, kTruncated or kIndexOutOfRange.
TokenStream parse_tokens(const std::string& bytes);

void write_tokens(const TokenStream& stream, const std::filesystem::path& path);
TokenStream read_tokens(const std::filesystem::path& path);

/// Audio -> tokens with the model's rate, hop and codebook size.
TokenStream encode_audio(const AudioBuffer& audio, Codec& codec);
/// Tokens -> audio of frames * hop samples. Throws kCompatibility when the
/// header disagrees with the model.
AudioBuffer decode_tokens(const TokenStream& stream, Codec& codec);

/// Reads (and resamples) a WAV file, then encode_audio.
TokenStream encode_file(const std::filesystem::path& audio_path, Codec& codec);
/// decode_tokens, then writes a 16-bit WAV.
void decode_file(const TokenStream& stream, Codec& codec,
                 const std::filesystem::path& audio_path);

}  // namespace wavtok
