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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mlasr {

// Short lowercase ASCII token naming a language or language pair
// ("hindi", "hindmara", "hindi-english"). Characters: [a-z0-9_-].
class LanguageId {
 public:
  LanguageId() = default;
  explicit LanguageId(std::string id);

  const std::string& str() const noexcept { return id_; }
  bool empty() const noexcept { return id_.empty(); }

  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;
  friend bool operator==(const LanguageId&, const LanguageId&) = default;

  static bool is_valid(std::string_view id) noexcept;

 private:
  std::string id_;
};

struct Utterance {
  std::string utt_id;
  std::optional<std::string> audio_path;
  std::string text;
  std::optional<LanguageId> language;
  std::optional<double> duration_s;
  // Optional split name ("train", "dev", ...). Round-trips only when present.
  std::optional<std::string> split;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

// Ordered, duplicate-free collection of utterances. Entries are kept sorted
// by utt_id so iteration order is independent of file order.
class Manifest {
 public:
  Manifest() = default;
  // Sorts by utt_id; throws DataError on a duplicate id.
  explicit Manifest(std::vector<Utterance> entries,
                    std::map<std::string, std::string> metadata = {});

  const std::vector<Utterance>& entries() const noexcept { return entries_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const Utterance* find(std::string_view utt_id) const;

  // New manifest with fn applied to every entry; ids may not collide.
  Manifest transformed(const std::function<void(Utterance&)>& fn) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;

 private:
  std::vector<Utterance> entries_;
  std::map<std::string, std::string> metadata_;
};

// JSONL, one utterance per line:
//   {"utt_id": str, "audio": str|null, "text": str, "language": str|null,
//    "duration_s": float|null}
// An optional leading {"metadata": {...}} line carries manifest metadata.
// Text is NFC-normalized on load.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view jsonl, std::string_view source_name = "<memory>");
void write_manifest(const Manifest& m, const std::filesystem::path& path);
std::string serialize_manifest(const Manifest& m);

struct LanguageStats {
  std::size_t count = 0;
  double total_duration_hrs = 0.0;

  friend bool operator==(const LanguageStats&, const LanguageStats&) = default;
};

inline constexpr std::string_view kUnknownLanguage = "unknown";

// Per-language utterance counts and declared hours. Unlabeled entries are
// grouped under "unknown"; missing durations count as zero.
std::map<std::string, LanguageStats> manifest_stats(const Manifest& m);

}  // namespace mlasr

template <>
struct std::hash<mlasr::LanguageId> {
  std::size_t operator()(const mlasr::LanguageId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
