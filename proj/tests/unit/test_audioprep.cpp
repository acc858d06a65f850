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
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "fixtures.hpp"
#include "mlasr/audioprep.hpp"
#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "oracles.hpp"

namespace mlasr::audio {
namespace {

using testing::sine;

std::vector<double> hann(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  }
  return x;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Frequency of the strongest DFT bin in [lo_hz, hi_hz]; 1 Hz bins for 1 s buffers.
double peak_hz(const std::vector<double>& x, int rate, double lo_hz, double hi_hz) {
  const double bin = static_cast<double>(rate) / static_cast<double>(x.size());
  const auto w = hann(x);
  double best = -1.0, best_hz = 0.0;
  for (auto k = static_cast<std::size_t>(lo_hz / bin); k <= static_cast<std::size_t>(hi_hz / bin); ++k) {
    const double m = oracle::dft_magnitude(w, k);
    if (m > best) {
      best = m;
      best_hz = static_cast<double>(k) * bin;
    }
  }
  return best_hz;
}

std::vector<std::uint8_t> wav_header(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                     std::uint16_t bits, std::uint32_t data_bytes) {
  std::vector<std::uint8_t> b;
  auto put = [&](const void* p, std::size_t n) {
    const auto* c = static_cast<const std::uint8_t*>(p);
    b.insert(b.end(), c, c + n);
  };
  auto u32 = [&](std::uint32_t v) { put(&v, 4); };
  auto u16 = [&](std::uint16_t v) { put(&v, 2); };
  put("RIFF", 4);
  u32(36 + data_bytes);
  put("WAVE", 4);
  put("fmt ", 4);
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  put("data", 4);
  u32(data_bytes);
  b.resize(b.size() + data_bytes, 0);
  return b;
}

TEST(Wav, RoundTrip) {
  testing::TempDir d("wav");
  AudioBuffer a = sine(440, 0.8, 8000, 1000);
  a.samples.push_back(1.0);   // saturates
  a.samples.push_back(-1.0);
  write_wav(a, d / "a.wav");
  const auto b = read_wav(d / "a.wav");
  EXPECT_EQ(b.sample_rate_hz, 8000);
  ASSERT_EQ(b.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) ASSERT_NEAR(b.samples[i], a.samples[i], 1.0 / 32768);
  EXPECT_EQ(encode_wav(b), encode_wav(a));
  EXPECT_EQ(parse_wav(encode_wav(b)), b);
}

TEST(Wav, RejectsUnsupported) {
  EXPECT_THROW(parse_wav(wav_header(1, 2, 8000, 16, 8)), UnsupportedFormat);
  EXPECT_THROW(parse_wav(wav_header(1, 1, 8000, 24, 6)), UnsupportedFormat);
  EXPECT_THROW(parse_wav(wav_header(3, 1, 8000, 32, 8)), UnsupportedFormat);
  EXPECT_NO_THROW(parse_wav(wav_header(1, 1, 8000, 16, 8)));
  auto truncated = wav_header(1, 1, 8000, 16, 8);
  truncated.resize(30);
  EXPECT_THROW(parse_wav(truncated), ParseError);
  const std::vector<std::uint8_t> junk = {'n', 'o', 'p', 'e'};
  EXPECT_THROW(parse_wav(junk), ParseError);
  EXPECT_THROW(read_wav("/nonexistent/x.wav"), IoError);
}

TEST(Resample2x, ToneAndImaging) {
  const auto in = sine(440, 0.5, 8000, 8000);
  const auto out = resample_2x(in);
  EXPECT_EQ(out.sample_rate_hz, 16000);
  ASSERT_EQ(out.samples.size(), 16000u);
  const auto p = oracle::power_spectrum(hann(out.samples));  // 1 Hz bins
  EXPECT_NEAR(static_cast<double>(argmax(p)), 440.0, 1.0);
  double total = 0.0, above = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    total += p[k];
    if (k > 4000) above += p[k];
  }
  EXPECT_LE(10.0 * std::log10(above / total), -40.0);
}

TEST(Resample2x, PassbandFlat) {
  // Even outputs copy the input, so the odd/even RMS ratio is the
  // interpolator's gain at that frequency.
  for (double f : {100.0, 500.0, 1000.0, 2000.0, 3000.0, 3400.0}) {
    const auto out = resample_2x(sine(f, 0.5, 8000, 8000, 0.3)).samples;
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 2000; i < 14000; i += 2) {
      even += out[i] * out[i];
      odd += out[i + 1] * out[i + 1];
    }
    EXPECT_NEAR(10.0 * std::log10(odd / even), 0.0, 0.1) << f << " Hz";
  }
}

TEST(Resample2x, DcAndEdges) {
  AudioBuffer dc{std::vector<double>(500, 0.5), 8000};
  const auto out = resample_2x(dc).samples;
  for (std::size_t i = 100; i < 900; ++i) ASSERT_NEAR(out[i], 0.5, 1e-9);
  EXPECT_TRUE(resample_2x(AudioBuffer{{}, 8000}).samples.empty());
  EXPECT_THROW(resample_2x(AudioBuffer{{0.0}, 16000}), DataError);
}

TEST(ResampleProperty, TonesKeepPeakBin) {
  Rng r(5);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t bin = 1 + r.below(424);  // 8 Hz bins, up to 3.4 kHz
    const auto in = sine(8.0 * static_cast<double>(bin), 0.3 + 0.5 * r.uniform(), 8000, 1000, r.uniform());
    const auto out = resample_2x(in).samples;
    ASSERT_EQ(argmax(oracle::power_spectrum(hann(in.samples))), bin);
    ASSERT_EQ(argmax(oracle::power_spectrum(hann(out))), bin);
  }
}

TEST(ResampleProperty, Linear) {
  Rng r(6);
  std::vector<double> x(700);
  for (auto& v : x) v = r.uniform() - 0.5;
  for (double a : {0.25, -3.0, 7.5}) {
    std::vector<double> ax = x;
    for (auto& v : ax) v *= a;
    const auto y = resample_2x(AudioBuffer{x, 8000}).samples;
    const auto ay = resample_2x(AudioBuffer{ax, 8000}).samples;
    for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(ay[i], a * y[i], 1e-9 * std::abs(a) + 1e-15);
    const auto g = resample(x, 16000, 11025);
    const auto ag = resample(ax, 16000, 11025);
    for (std::size_t i = 0; i < g.size(); ++i) ASSERT_NEAR(ag[i], a * g[i], 1e-9 * std::abs(a) + 1e-15);
  }
}

TEST(Resample, GenericLengthsAndTone) {
  const auto in = sine(440, 0.5, 16000, 16000);
  const auto down = resample(in.samples, 16000, 8000);
  EXPECT_EQ(down.size(), 8000u);
  EXPECT_NEAR(peak_hz(down, 8000, 300, 600), 440.0, 1.0);
  EXPECT_EQ(resample(in.samples, 16000, 22050).size(), 22050u);
  EXPECT_THROW(resample(in.samples, 0, 8000), DataError);
}

TEST(Loudness, Examples) {
  const double amp = std::pow(10.0, -30.0 / 20.0) * std::numbers::sqrt2;
  const auto quiet = sine(300, amp, 16000, 16000);
  EXPECT_NEAR(rms_dbfs(quiet.samples), -30.0, 1e-3);
  const auto r = loudness_normalize(quiet);
  EXPECT_NEAR(r.gain_db, 10.0, 1e-3);
  EXPECT_NEAR(rms_dbfs(r.buffer.samples), -20.0, 1e-3);
  EXPECT_EQ(r.clip_fraction, 0.0);

  const auto loud = loudness_normalize(sine(300, 0.5, 16000, 16000), 0.0);
  EXPECT_NEAR(loud.clip_fraction, 0.5, 0.01);
  for (double v : loud.buffer.samples) ASSERT_LE(std::abs(v), 1.0);

  EXPECT_THROW(loudness_normalize(AudioBuffer{std::vector<double>(100, 0.0), 16000}), DataError);
  EXPECT_TRUE(std::isinf(rms_dbfs(std::vector<double>(10, 0.0))));
}

TEST(Augment, Gain) {
  const auto in = sine(200, 0.25, 16000, 16000);
  AugmentSpec s;
  s.gain_db = 20.0 * std::log10(2.0);
  const auto out = augment(in, s);
  EXPECT_NEAR(*std::max_element(out.samples.begin(), out.samples.end()), 0.5, 5e-3);
}

TEST(Augment, IdentityIsNearIdentity) {
  const auto in = sine(300, 0.6, 16000, 16000);
  const auto out = augment(in, AugmentSpec{});
  ASSERT_EQ(out.samples.size(), in.samples.size());
  for (std::size_t i = 0; i < in.samples.size(); ++i) ASSERT_NEAR(out.samples[i], in.samples[i], 1e-2);
}

TEST(Augment, PaceScalesLength) {
  const auto in = sine(300, 0.5, 16000, 16000);
  for (double pace : {0.5, 0.9, 1.1, 2.0}) {
    AugmentSpec s;
    s.pace_factor = pace;
    const auto out = augment(in, s);
    EXPECT_NEAR(static_cast<double>(out.samples.size()), 16000.0 / pace, 1.0) << pace;
    EXPECT_EQ(out.sample_rate_hz, 16000);
  }
}

TEST(Augment, PitchShiftsFrequencyKeepsLength) {
  const auto in = sine(440, 0.5, 16000, 16000);
  for (double st : {-2.0, -1.0, 1.0, 3.0}) {
    AugmentSpec s;
    s.pitch_semitones = st;
    const auto out = augment(in, s);
    EXPECT_NEAR(static_cast<double>(out.samples.size()), 16000.0, 160.0);
    const double want = 440.0 * std::pow(2.0, st / 12.0);
    EXPECT_NEAR(peak_hz(out.samples, 16000, 300, 700), want, 0.02 * want) << st;
  }
}

TEST(Augment, MeasuredSnr) {
  const auto in = sine(250, 0.1, 16000, 16000);
  for (double snr : {0.0, 10.0, 20.0, 35.0}) {
    AugmentSpec s;
    s.snr_db = snr;
    s.seed = 77;
    const auto out = augment(in, s);
    std::vector<double> noise(in.samples.size());
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = out.samples[i] - in.samples[i];
    const double measured = 20.0 * std::log10(oracle::rms(in.samples) / oracle::rms(noise));
    EXPECT_NEAR(measured, snr, 0.5);
  }
}

TEST(Augment, DeterministicAndValidated) {
  const auto in = sine(250, 0.3, 16000, 4000);
  const AugmentSpec s{3.0, 20.0, 1.1, 1.0, 9};
  EXPECT_EQ(augment(in, s), augment(in, s));
  EXPECT_NE(augment(in, s, 1), augment(in, s, 2));
  EXPECT_THROW(augment(in, AugmentSpec{0, 20, 2.5, 0, 0}), DataError);
  EXPECT_THROW(augment(in, AugmentSpec{0, 61, 1, 0, 0}), DataError);
  EXPECT_THROW(augment(in, AugmentSpec{0, -1, 1, 0, 0}), DataError);
  EXPECT_THROW(augment(in, AugmentSpec{NAN, 20, 1, 0, 0}), DataError);
}

TEST(TimeStretch, HitsTargetLengthAndKeepsPitch) {
  const auto in = sine(500, 0.5, 16000, 16000);
  const auto out = time_stretch(in.samples, 20000, 16000);
  EXPECT_EQ(out.size(), 20000u);
  EXPECT_NEAR(peak_hz(std::vector<double>(out.begin(), out.begin() + 16000), 16000, 400, 600), 500.0, 10.0);
}

Manifest write_corpus(const testing::TempDir& d, std::size_t n) {
  std::vector<Utterance> us;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "u" + std::to_string(i);
    write_wav(sine(200.0 + 50.0 * static_cast<double>(i), 0.4, 16000, 16000), d / (id + ".wav"));
    auto u = testing::utt(id, "text " + id, "hi");
    u.audio_path = id + ".wav";
    us.push_back(u);
  }
  return Manifest(std::move(us));
}

TEST(AugmentManifest, TriplesAndReproduces) {
  testing::TempDir d("augm");
  const auto m = write_corpus(d, 4);
  const std::vector<AugmentSpec> specs = {{3, 30, 1.1, 1, 1}, {-3, 20, 0.9, -1, 2}};
  const auto a = augment_manifest(m, specs, d / "out1", d.path());
  ASSERT_EQ(a.size(), 12u);
  ASSERT_NE(a.find("u2__aug1"), nullptr);
  EXPECT_EQ(a.find("u2__aug2")->text, "text u2");
  EXPECT_NEAR(*a.find("u2__aug1")->duration_s, 1.0 / 1.1, 1e-3);
  const auto b = augment_manifest(m, specs, d / "out2", d.path(), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (const char* k : {"__aug1.wav", "__aug2.wav"}) {
      const std::string f = "u" + std::to_string(i) + k;
      ASSERT_EQ(testing::read_text(d / "out1" / f), testing::read_text(d / "out2" / f)) << f;
    }
  }
  EXPECT_THROW(augment_manifest(m, std::vector<AugmentSpec>{specs[0]}, d / "x", d.path()), DataError);
  Manifest no_audio({testing::utt("z", "t", "hi")});
  EXPECT_THROW(augment_manifest(no_audio, specs, d / "y", d.path()), DataError);
}

}  // namespace
}  // namespace mlasr::audio
