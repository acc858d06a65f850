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
#include "mlasr/audioprep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>

#include "mlasr/error.hpp"
#include "mlasr/parallel.hpp"
#include "mlasr/rng.hpp"

namespace mlasr::audio {
namespace {

constexpr double kKaiserBeta = 8.6;
// Kernel half-width in input samples; the 2x interpolator then has 64 taps
// on its fractional phase.
constexpr int kHalfWidth = 32;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Power series for I0; std::cyl_bessel_i is an order of magnitude slower
// and this runs once per filter tap.
double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64 && term > 1e-17 * sum; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
  }
  return sum;
}

// Kaiser window at offset tau within half-width w; zero outside.
double kaiser(double tau, double w) {
  const double r = tau / w;
  if (r <= -1.0 || r >= 1.0) return 0.0;
  static const double denom = bessel_i0(kKaiserBeta);
  return bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / denom;
}

const std::array<double, 2 * kHalfWidth>& half_phase_taps() {
  static const auto taps = [] {
    std::array<double, 2 * kHalfWidth> t{};
    double sum = 0.0;
    for (int k = 0; k < 2 * kHalfWidth; ++k) {
      const double tau = (kHalfWidth - 0.5) - k;
      t[static_cast<std::size_t>(k)] = sinc(tau) * kaiser(tau, kHalfWidth);
      sum += t[static_cast<std::size_t>(k)];
    }
    for (auto& v : t) v /= sum;
    return t;
  }();
  return taps;
}

void reject_non_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError(std::string(what) + ": buffer contains NaN or Inf");
  }
}

}  // namespace

AudioBuffer parse_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || std::string_view(reinterpret_cast<const char*>(b.data()), 4) != "RIFF" ||
      std::string_view(reinterpret_cast<const char*>(b.data()) + 8, 4) != "WAVE") {
    throw ParseError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string_view id(reinterpret_cast<const char*>(b.data()) + pos, 4);
    const std::uint32_t size = read_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) throw ParseError("WAV chunk '" + std::string(id) + "' overruns the file");
    if (id == "fmt ") {
      if (size < 16) throw ParseError("WAV fmt chunk too short");
      format = read_u16(b, body);
      channels = read_u16(b, body + 2);
      rate = read_u32(b, body + 4);
      bits = read_u16(b, body + 14);
      if (format == 0xFFFE && size >= 26) format = read_u16(b, body + 24);  // extensible: sub-format GUID
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("WAV data chunk before fmt chunk");
      if (format != 1 || bits != 16) throw UnsupportedFormat("only PCM16 WAV is supported");
      if (channels != 1) throw UnsupportedFormat("only mono WAV is supported (file has " + std::to_string(channels) + " channels)");
      if (rate == 0) throw ParseError("WAV sample rate is zero");
      if (size % 2 != 0) throw ParseError("WAV data chunk has an odd byte count");
      AudioBuffer out;
      out.sample_rate_hz = static_cast<int>(rate);
      out.samples.resize(size / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const auto s = static_cast<std::int16_t>(read_u16(b, body + 2 * i));
        out.samples[i] = static_cast<double>(s) / 32768.0;
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw ParseError(have_fmt ? "WAV file has no data chunk" : "WAV file has no fmt chunk");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf) {
  if (buf.sample_rate_hz <= 0) throw DataError("sample rate must be positive");
  reject_non_finite(buf.samples, "write_wav");
  const auto data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  for (char c : std::string_view("RIFF")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, 36 + data_bytes);
  for (char c : std::string_view("WAVEfmt ")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  for (char c : std::string_view("data")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, data_bytes);
  for (double s : buf.samples) {
    // nearbyint rounds half to even in the default rounding mode.
    const double q = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
  const auto bytes = encode_wav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write WAV '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing WAV '" + path.string() + "'");
}

AudioBuffer resample_2x(const AudioBuffer& buf) {
  if (buf.sample_rate_hz != 8000) {
    throw DataError("resample_2x expects 8000 Hz input, got " + std::to_string(buf.sample_rate_hz) + " Hz");
  }
  const auto& taps = half_phase_taps();
  const auto& x = buf.samples;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  AudioBuffer out;
  out.sample_rate_hz = 16000;
  out.samples.resize(x.size() * 2);
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    out.samples[static_cast<std::size_t>(2 * m)] = x[static_cast<std::size_t>(m)];
    double acc = 0.0;
    // Output time m + 0.5; tap k sits on input m - (kHalfWidth - 1) + k.
    const std::ptrdiff_t first = m - (kHalfWidth - 1);
    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, -first);
    const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(2 * kHalfWidth, n - first);
    for (std::ptrdiff_t k = k_lo; k < k_hi; ++k) {
      acc += taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(first + k)];
    }
    out.samples[static_cast<std::size_t>(2 * m + 1)] = acc;
  }
  return out;
}

std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate) {
  if (!(from_rate > 0.0) || !(to_rate > 0.0)) throw DataError("resample rates must be positive");
  const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * to_rate / from_rate));
  std::vector<double> y(out_len, 0.0);
  if (x.empty()) return y;
  const double step = from_rate / to_rate;        // input samples per output sample
  const double cutoff = std::min(1.0, to_rate / from_rate);  // relative to input Nyquist
  const double half = kHalfWidth / cutoff;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  for (std::size_t k = 0; k < out_len; ++k) {
    const double t = static_cast<double>(k) * step;
    const auto lo = static_cast<std::ptrdiff_t>(std::floor(t - half)) + 1;
    const auto hi = static_cast<std::ptrdiff_t>(std::ceil(t + half)) - 1;
    double acc = 0.0;
    double norm = 0.0;
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
      const double tau = t - static_cast<double>(i);
      const double w = sinc(cutoff * tau) * kaiser(tau, half);
      norm += w;
      if (i >= 0 && i < n) acc += w * x[static_cast<std::size_t>(i)];
    }
    y[k] = norm != 0.0 ? acc / norm : 0.0;
  }
  return y;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double rms_dbfs(std::span<const double> x) {
  const double r = rms(x);
  return r > 0.0 ? 20.0 * std::log10(r) : -std::numeric_limits<double>::infinity();
}

NormalizeResult loudness_normalize(const AudioBuffer& buf, double target_rms_dbfs) {
  reject_non_finite(buf.samples, "loudness_normalize");
  const double r = rms(buf.samples);
  if (!(r > 0.0)) throw DataError("cannot loudness-normalize a silent buffer");
  NormalizeResult out;
  out.gain_db = target_rms_dbfs - 20.0 * std::log10(r);
  const double g = std::pow(10.0, out.gain_db / 20.0);
  out.buffer.sample_rate_hz = buf.sample_rate_hz;
  out.buffer.samples.resize(buf.samples.size());
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    const double v = buf.samples[i] * g;
    if (v > 1.0 || v < -1.0) ++clipped;
    out.buffer.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  out.clip_fraction = static_cast<double>(clipped) / static_cast<double>(buf.samples.size());
  return out;
}

void AugmentSpec::validate() const {
  if (!std::isfinite(gain_db) || !std::isfinite(snr_db) || !std::isfinite(pace_factor) ||
      !std::isfinite(pitch_semitones)) {
    throw DataError("augment spec values must be finite");
  }
  if (pace_factor < 0.5 || pace_factor > 2.0) throw DataError("pace_factor must be in [0.5, 2.0]");
  if (snr_db < 0.0 || snr_db > 60.0) throw DataError("snr_db must be in [0, 60]");
}

std::vector<double> time_stretch(std::span<const double> x, std::size_t target_length, int sample_rate_hz) {
  std::vector<double> out(target_length, 0.0);
  if (x.empty() || target_length == 0) return out;
  auto frame = static_cast<std::ptrdiff_t>(std::lround(0.030 * sample_rate_hz));
  frame = std::max<std::ptrdiff_t>(8, frame + (frame & 1));
  const std::ptrdiff_t synth_hop = frame / 2;
  const auto tolerance = static_cast<std::ptrdiff_t>(std::lround(0.0075 * sample_rate_hz));
  const double analysis_hop = static_cast<double>(synth_hop) * static_cast<double>(x.size()) /
                              static_cast<double>(target_length);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  auto at = [&](std::ptrdiff_t i) { return (i >= 0 && i < n) ? x[static_cast<std::size_t>(i)] : 0.0; };

  std::vector<double> window(static_cast<std::size_t>(frame));
  for (std::ptrdiff_t i = 0; i < frame; ++i) {
    window[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(frame));
  }
  std::vector<double> acc(target_length + static_cast<std::size_t>(frame), 0.0);
  std::vector<double> wsum(acc.size(), 0.0);

  std::ptrdiff_t prev = 0;
  for (std::ptrdiff_t k = 0; k * synth_hop < static_cast<std::ptrdiff_t>(target_length); ++k) {
    std::ptrdiff_t chosen = 0;
    if (k > 0) {
      const auto nominal = static_cast<std::ptrdiff_t>(std::llround(static_cast<double>(k) * analysis_hop));
      const std::ptrdiff_t natural = prev + synth_hop;
      double best = -std::numeric_limits<double>::infinity();
      chosen = nominal;
      for (std::ptrdiff_t d = -tolerance; d <= tolerance; ++d) {
        const std::ptrdiff_t cand = nominal + d;
        double corr = 0.0;
        for (std::ptrdiff_t i = 0; i < frame; ++i) corr += at(cand + i) * at(natural + i);
        if (corr > best) {
          best = corr;
          chosen = cand;
        }
      }
    }
    const std::ptrdiff_t dst = k * synth_hop;
    for (std::ptrdiff_t i = 0; i < frame; ++i) {
      const double w = window[static_cast<std::size_t>(i)];
      acc[static_cast<std::size_t>(dst + i)] += w * at(chosen + i);
      wsum[static_cast<std::size_t>(dst + i)] += w;
    }
    prev = chosen;
  }
  for (std::size_t i = 0; i < target_length; ++i) out[i] = wsum[i] > 1e-9 ? acc[i] / wsum[i] : 0.0;
  return out;
}

AudioBuffer augment(const AudioBuffer& buf, const AugmentSpec& spec, std::uint64_t rng_seed) {
  spec.validate();
  reject_non_finite(buf.samples, "augment");
  const int fs = buf.sample_rate_hz;
  const double g = std::pow(10.0, spec.gain_db / 20.0);
  std::vector<double> x(buf.samples.size());
  std::transform(buf.samples.begin(), buf.samples.end(), x.begin(), [g](double v) { return v * g; });

  if (spec.pace_factor != 1.0) x = resample(x, fs * spec.pace_factor, fs);
  if (spec.pitch_semitones != 0.0) {
    const double ratio = std::pow(2.0, spec.pitch_semitones / 12.0);
    const std::size_t length = x.size();
    x = time_stretch(resample(x, fs * ratio, fs), length, fs);
  }

  const double signal_rms = rms(x);
  if (signal_rms > 0.0) {
    const double sigma = signal_rms / std::pow(10.0, spec.snr_db / 20.0);
    Rng rng(rng_seed);
    for (double& v : x) v += sigma * rng.gaussian();
  }
  for (double& v : x) v = std::clamp(v, -1.0, 1.0);
  return AudioBuffer{std::move(x), fs};
}

AudioBuffer augment(const AudioBuffer& buf, const AugmentSpec& spec) { return augment(buf, spec, spec.seed); }

Manifest augment_manifest(const Manifest& m, std::span<const AugmentSpec> specs, const std::filesystem::path& out_dir,
                          const std::filesystem::path& audio_root, int jobs) {
  if (specs.size() != 2) throw DataError("augment_manifest takes exactly 2 specs, got " + std::to_string(specs.size()));
  for (const auto& s : specs) s.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  const auto& entries = m.entries();
  std::vector<std::array<Utterance, 2>> copies(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const Utterance& u = entries[i];
    if (!u.audio_path) throw DataError("utterance '" + u.utt_id + "' has no audio path");
    std::filesystem::path src(*u.audio_path);
    if (src.is_relative() && !audio_root.empty()) src = audio_root / src;
    AudioBuffer audio;
    try {
      audio = read_wav(src);
    } catch (const Error& e) {
      throw DataError("utterance '" + u.utt_id + "': " + e.what());
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string id = u.utt_id + "__aug" + std::to_string(k + 1);
      const AudioBuffer aug = augment(audio, specs[k], derive_seed(specs[k].seed, u.utt_id));
      const std::filesystem::path dst = out_dir / (id + ".wav");
      write_wav(aug, dst);
      Utterance c = u;
      c.utt_id = id;
      c.audio_path = dst.string();
      c.duration_s = aug.duration_s();
      copies[i][k] = std::move(c);
    }
  });

  std::vector<Utterance> all = entries;
  for (auto& pair : copies) {
    for (auto& c : pair) all.push_back(std::move(c));
  }
  return Manifest(std::move(all), m.metadata());
}

}  // namespace mlasr::audio
