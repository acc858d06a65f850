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

#include "fixtures.hpp"
#include "mlasr/corpus.hpp"
#include "mlasr/error.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/unicode.hpp"

namespace mlasr {
namespace {

using testing::read_text;
using testing::TempDir;
using testing::utt;
using testing::write_text;

TEST(LanguageId, Validation) {
  EXPECT_NO_THROW(LanguageId("hindmara"));
  EXPECT_NO_THROW(LanguageId("hindi-english"));
  EXPECT_THROW(LanguageId(""), DataError);
  EXPECT_THROW(LanguageId("Hindi"), DataError);
  EXPECT_THROW(LanguageId("hi ndi"), DataError);
  EXPECT_LT(LanguageId("a"), LanguageId("b"));
}

TEST(Manifest, LoadsThreeLines) {
  TempDir d("corpus");
  write_text(d / "m.jsonl",
             "{\"utt_id\":\"u3\",\"audio\":\"a/3.wav\",\"text\":\"c\",\"language\":\"odia\",\"duration_s\":1.5}\n"
             "{\"utt_id\":\"u1\",\"audio\":null,\"text\":\"a\",\"language\":null,\"duration_s\":null}\n"
             "{\"utt_id\":\"u2\",\"text\":\"b\"}\n");
  const Manifest m = load_manifest(d / "m.jsonl");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.entries()[0].utt_id, "u1");
  EXPECT_EQ(m.entries()[2].utt_id, "u3");
  EXPECT_EQ(m.entries()[2].language, LanguageId("odia"));
  EXPECT_EQ(m.entries()[2].duration_s, 1.5);
  EXPECT_FALSE(m.entries()[0].audio_path);
  ASSERT_NE(m.find("u2"), nullptr);
  EXPECT_EQ(m.find("zz"), nullptr);
}

TEST(Manifest, DuplicateIdNamed) {
  try {
    parse_manifest("{\"utt_id\":\"u1\",\"text\":\"a\"}\n{\"utt_id\":\"u1\",\"text\":\"b\"}\n");
    FAIL() << "expected a duplicate-id error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("u1"), std::string::npos);
  }
  EXPECT_THROW(Manifest({utt("x", "a"), utt("x", "b")}), DataError);
}

TEST(Manifest, ErrorsCarryLineNumber) {
  auto expect_line = [](std::string_view text, std::string_view marker) {
    try {
      parse_manifest(text, "m.jsonl");
      FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(marker), std::string::npos) << e.what();
    }
  };
  expect_line("{\"utt_id\":\"u1\",\"text\":\"a\"}\n{\"utt_id\":\"u2\"}\n", "m.jsonl:2");
  expect_line("{\"utt_id\":\"u1\",\"text\":\"a\"}\n\n{not json\n", "m.jsonl:3");
  expect_line("{\"utt_id\":\"u1\",\"text\":\"a\",\"duration_s\":-1}\n", "m.jsonl:1");
  expect_line("{\"utt_id\":\"u1\",\"text\":\"a\",\"language\":\"Bad Id\"}\n", "m.jsonl:1");
}

TEST(Manifest, TextIsNfcOnLoad) {
  const Manifest m = parse_manifest("{\"utt_id\":\"u\",\"text\":\"e\\u0301\"}\n");
  EXPECT_EQ(m.entries()[0].text, "\xc3\xa9");
}

TEST(Manifest, MissingFileIsIoError) { EXPECT_THROW(load_manifest("/nonexistent/m.jsonl"), IoError); }

TEST(ManifestStats, Examples) {
  EXPECT_TRUE(manifest_stats(Manifest{}).empty());
  Utterance a = utt("a", "x", "hindi"), b = utt("b", "y", "hindi");
  a.duration_s = 1800;
  b.duration_s = 1800;
  const auto s = manifest_stats(Manifest({a, b, utt("c", "z")}));
  EXPECT_EQ(s.at("hindi").count, 2u);
  EXPECT_DOUBLE_EQ(s.at("hindi").total_duration_hrs, 1.0);
  EXPECT_EQ(s.at(std::string(kUnknownLanguage)).count, 1u);
}

TEST(ManifestWrite, EmptyManifestIsZeroLineFile) {
  TempDir d("corpus");
  write_manifest(Manifest{}, d / "e.jsonl");
  EXPECT_EQ(read_text(d / "e.jsonl"), "");
  EXPECT_TRUE(load_manifest(d / "e.jsonl").empty());
}

TEST(ManifestWrite, NonAsciiBytesSurvive) {
  TempDir d("corpus");
  const std::string text = "नमस्ते";
  write_manifest(Manifest({utt("u", text, "hindmara")}), d / "m.jsonl");
  const Manifest back = load_manifest(d / "m.jsonl");
  EXPECT_EQ(back.entries()[0].text, text);
  // Stored as raw UTF-8, not \u escapes.
  EXPECT_NE(read_text(d / "m.jsonl").find(text), std::string::npos);
}

Manifest random_manifest(std::uint64_t seed) {
  Rng r(seed);
  const char32_t pool[] = {U'a', U'b', U'क', U'ा', U'க', U' ', U'"', U'\\'};
  std::vector<Utterance> es;
  const std::size_t n = r.below(12);
  for (std::size_t i = 0; i < n; ++i) {
    Utterance u;
    u.utt_id = "utt" + std::to_string(r.below(1000)) + "_" + std::to_string(i);
    std::u32string t;
    for (std::size_t k = r.below(20); k > 0; --k) t += pool[r.below(std::size(pool))];
    u.text = unicode::nfc(unicode::encode(t));
    if (r.below(2)) u.language = LanguageId(r.below(2) ? "odia" : "tamil");
    if (r.below(2)) u.audio_path = "wav/" + u.utt_id + ".wav";
    if (r.below(2)) u.duration_s = static_cast<double>(r.below(100000)) / 1000.0;
    if (r.below(3) == 0) u.split = r.below(2) ? "train" : "test";
    es.push_back(u);
  }
  std::map<std::string, std::string> md;
  if (r.below(2)) md["source"] = "synthetic";
  return Manifest(std::move(es), std::move(md));
}

TEST(ManifestProperty, RoundTripIdentity) {
  TempDir d("corpus");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Manifest m = random_manifest(seed);
    write_manifest(m, d / "m.jsonl");
    ASSERT_EQ(load_manifest(d / "m.jsonl"), m) << "seed " << seed;
    ASSERT_EQ(parse_manifest(serialize_manifest(m)), m);
  }
}

TEST(ManifestProperty, StatsConserveCount) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Manifest m = random_manifest(seed);
    std::size_t total = 0;
    for (const auto& [lang, s] : manifest_stats(m)) total += s.count;
    ASSERT_EQ(total, m.size());
  }
}

TEST(ManifestProperty, LoadingIsDeterministic) {
  TempDir d("corpus");
  write_manifest(random_manifest(3), d / "m.jsonl");
  EXPECT_EQ(load_manifest(d / "m.jsonl"), load_manifest(d / "m.jsonl"));
}

TEST(Manifest, EntriesSortedById) {
  const Manifest m = random_manifest(11);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LT(m.entries()[i - 1].utt_id, m.entries()[i].utt_id);
}

}  // namespace
}  // namespace mlasr
