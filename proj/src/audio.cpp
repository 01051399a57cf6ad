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

#include "wavtok/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <string>

#include "wavtok/error.hpp"

namespace wavtok {

AudioBuffer::AudioBuffer(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  check(sample_rate_ > 0, ErrorCode::kInvalidArgument,
        "sample rate must be positive");
  for (float s : samples_) {
    check(std::isfinite(s), ErrorCode::kInvalidArgument,
          "audio samples must be finite");
  }
}

namespace {

template <typename T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 50; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-12 * sum) break;
  }
  return sum;
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  check(data.size() >= 12 && data.compare(0, 4, "RIFF") == 0 &&
            data.compare(8, 4, "WAVE") == 0,
        ErrorCode::kBadMagic, path.string() + " is not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    std::string id = data.substr(pos, 4);
    std::uint32_t size = read_le<std::uint32_t>(data.data() + pos + 4);
    std::size_t body = pos + 8;
    if (id == "fmt ") {
      check(size >= 16 && body + 16 <= data.size(), ErrorCode::kTruncated,
            "fmt chunk");
      format = read_le<std::uint16_t>(data.data() + body);
      channels = read_le<std::uint16_t>(data.data() + body + 2);
      rate = read_le<std::uint32_t>(data.data() + body + 4);
      bits = read_le<std::uint16_t>(data.data() + body + 14);
      if (format == 0xFFFE && size >= 26) {
        // WAVE_FORMAT_EXTENSIBLE: the subformat GUID starts with the tag.
        format = read_le<std::uint16_t>(data.data() + body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      check(have_fmt, ErrorCode::kCorrupt, "data chunk before fmt chunk");
      check(channels == 1, ErrorCode::kInvalidArgument,
            "only mono audio is supported, got " + std::to_string(channels) +
                " channels");
      std::size_t avail = std::min<std::size_t>(size, data.size() - body);
      std::vector<float> samples;
      if (format == 1 && bits == 16) {
        samples.resize(avail / 2);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          samples[i] =
              read_le<std::int16_t>(data.data() + body + 2 * i) / 32768.0f;
        }
      } else if (format == 3 && bits == 32) {
        samples.resize(avail / 4);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          samples[i] = read_le<float>(data.data() + body + 4 * i);
        }
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "unsupported WAV encoding (format " +
                        std::to_string(format) + ", " + std::to_string(bits) +
                        " bits)");
      }
      return AudioBuffer(std::move(samples), static_cast<int>(rate));
    }
    pos = body + size + (size & 1);
  }
  throw Error(ErrorCode::kTruncated, path.string() + " has no data chunk");
}

AudioBuffer load_audio(const std::filesystem::path& path, int target_rate) {
  AudioBuffer audio = read_wav(path);
  if (audio.sample_rate() == target_rate) return audio;
  return resample(audio, target_rate);
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding) {
  std::ofstream os(path, std::ios::binary);
  check(os.good(), ErrorCode::kIo, "cannot write " + path.string());
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.size() * (bits / 8));
  os.write("RIFF", 4);
  write_le<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  write_le<std::uint32_t>(os, 16);
  write_le<std::uint16_t>(os, pcm ? 1 : 3);
  write_le<std::uint16_t>(os, 1);
  write_le<std::uint32_t>(os, audio.sample_rate());
  write_le<std::uint32_t>(os, audio.sample_rate() * (bits / 8));
  write_le<std::uint16_t>(os, bits / 8);
  write_le<std::uint16_t>(os, bits);
  os.write("data", 4);
  write_le<std::uint32_t>(os, data_bytes);
  for (float s : audio.samples()) {
    if (pcm) {
      float c = std::clamp(s, -1.0f, 1.0f);
      write_le<std::int16_t>(
          os, static_cast<std::int16_t>(std::lround(c * 32767.0f)));
    } else {
      write_le<float>(os, s);
    }
  }
  check(os.good(), ErrorCode::kIo, "write failed for " + path.string());
}

AudioBuffer resample(const AudioBuffer& audio, int target_rate) {
  check(target_rate > 0, ErrorCode::kInvalidArgument,
        "target rate must be positive");
  const int src_rate = audio.sample_rate();
  if (src_rate == target_rate || audio.empty()) {
    return AudioBuffer(std::vector<float>(audio.samples().begin(),
                                          audio.samples().end()),
                       target_rate);
  }
  constexpr int kZeroCrossings = 16;
  constexpr double kBeta = 8.6;
  constexpr double kRolloff = 0.945;
  const double ratio = static_cast<double>(target_rate) / src_rate;
  const double cutoff = std::min(1.0, ratio) * kRolloff;  // in input cycles
  const double half_width = kZeroCrossings / cutoff;
  const double i0_beta = bessel_i0(kBeta);

  auto in = audio.samples();
  const auto n_in = static_cast<std::int64_t>(in.size());
  const auto n_out = static_cast<std::int64_t>(
      std::llround(static_cast<double>(n_in) * target_rate / src_rate));
  std::vector<float> out(static_cast<std::size_t>(n_out));
  for (std::int64_t i = 0; i < n_out; ++i) {
    const double center = static_cast<double>(i) * src_rate / target_rate;
    const auto lo = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(center - half_width)));
    const auto hi = std::min<std::int64_t>(
        n_in - 1, static_cast<std::int64_t>(std::floor(center + half_width)));
    double acc = 0.0;
    for (std::int64_t j = lo; j <= hi; ++j) {
      const double t = (static_cast<double>(j) - center) * cutoff;
      const double r = t / kZeroCrossings;
      const double win = bessel_i0(kBeta * std::sqrt(std::max(0.0, 1 - r * r))) / i0_beta;
      const double sinc =
          t == 0.0 ? 1.0
                   : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
      acc += in[static_cast<std::size_t>(j)] * cutoff * sinc * win;
    }
    out[static_cast<std::size_t>(i)] = static_cast<float>(acc);
  }
  return AudioBuffer(std::move(out), target_rate);
}

}  // namespace wavtok
