// Copyright 2026 The mlasr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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
#include <string>
#include <vector>

#include "mlasr/corpus.hpp"

namespace mlasr::audio {

// Mono buffer, samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  double duration_s() const noexcept {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

// PCM16 little-endian mono. Samples scale by 1/32768; writing rounds half to
// even and saturates.
AudioBuffer read_wav(const std::filesystem::path& path);
AudioBuffer parse_wav(std::span<const std::uint8_t> bytes);
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf);

// 8 kHz -> 16 kHz. Even outputs copy the input; odd outputs use a 64-tap
// Kaiser-windowed sinc (beta 8.6) with unit DC gain. Throws DataError when
// the input is not 8 kHz.
AudioBuffer resample_2x(const AudioBuffer& buf);

// Band-limited resampling to an arbitrary rate by windowed-sinc
// interpolation, anti-aliased when downsampling. Output length is
// round(n * to / from).
std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate);

double rms(std::span<const double> x);
// 20 log10(rms); -inf for silence.
double rms_dbfs(std::span<const double> x);

inline constexpr double kDefaultTargetDbfs = -20.0;

struct NormalizeResult {
  AudioBuffer buffer;
  double gain_db = 0.0;
  double clip_fraction = 0.0;
};

// Scales to target RMS dBFS and hard-clips to [-1, 1]. Throws DataError on
// silent input.
NormalizeResult loudness_normalize(const AudioBuffer& buf, double target_rms_dbfs = kDefaultTargetDbfs);

struct AugmentSpec {
  double gain_db = 0.0;
  double snr_db = 60.0;
  double pace_factor = 1.0;
  double pitch_semitones = 0.0;
  std::uint64_t seed = 0;

  // Throws DataError unless pace in [0.5, 2], snr in [0, 60] and all finite.
  void validate() const;
};

// Pitch-preserving time stretch (WSOLA) to target_length samples.
std::vector<double> time_stretch(std::span<const double> x, std::size_t target_length, int sample_rate_hz);

// Applies gain, pace (resample and relabel), pitch (resample, then stretch
// back to the original length) and finally Gaussian noise at snr_db relative
// to the signal RMS. Noise is drawn from Rng(rng_seed). Output is clipped to
// [-1, 1].
AudioBuffer augment(const AudioBuffer& buf, const AugmentSpec& spec, std::uint64_t rng_seed);
// Convenience overload seeding the noise with spec.seed.
AudioBuffer augment(const AudioBuffer& buf, const AugmentSpec& spec);

// Writes "<utt_id>__aug<k>.wav" (k = 1, 2) under out_dir and returns the
// original entries plus both copies. Relative audio paths resolve against
// audio_root. Noise for each copy is seeded from (spec.seed, utt_id).
Manifest augment_manifest(const Manifest& m, std::span<const AugmentSpec> specs,
                          const std::filesystem::path& out_dir,
                          const std::filesystem::path& audio_root = {}, int jobs = 1);

}  // namespace mlasr::audio
