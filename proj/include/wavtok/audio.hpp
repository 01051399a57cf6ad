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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace wavtok {

/// Mono waveform. Samples are nominally in [-1, 1] and always finite.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<float> samples, int sample_rate);

  std::span<const float> samples() const { return samples_; }
  std::vector<float>& mutable_samples() { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<float> samples_;
  int sample_rate_ = 24000;
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a mono 16-bit PCM or 32-bit float WAV file. Multi-channel input is
/// rejected.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Reads a WAV file and resamples it to `target_rate` if needed.
AudioBuffer load_audio(const std::filesystem::path& path, int target_rate);

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::kPcm16);

/// Band-limited resampling with a Kaiser-windowed sinc kernel.
AudioBuffer resample(const AudioBuffer& audio, int target_rate);

}  // namespace wavtok
