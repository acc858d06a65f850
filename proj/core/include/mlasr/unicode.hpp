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

#include <string>
#include <string_view>
#include <vector>

namespace mlasr::unicode {

// Decodes UTF-8 into Unicode scalars. Throws ParseError on ill-formed input.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view scalars);
std::string encode(char32_t c);

// Canonical composition (NFC).
std::string nfc(std::string_view utf8);
bool is_nfc(std::string_view utf8);

bool is_whitespace(char32_t c);

// Unicode general category Po, Ps, Pe, Pd, Pi or Pf.
bool is_punctuation(char32_t c);
bool is_latin_script(char32_t c);
char32_t to_lower(char32_t c);

// True when c is unaffected by normalization in every context.
bool is_normalization_inert(char32_t c);
bool is_letter(char32_t c);

// Splits on runs of Unicode whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view utf8);

// "U+0915" style label for diagnostics.
std::string codepoint_label(char32_t c);

}  // namespace mlasr::unicode
