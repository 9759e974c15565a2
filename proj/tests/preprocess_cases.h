// Copyright 2026 The HateMonitor Authors.
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

// Preprocessing cases shared by the unit and acceptance suites.

#ifndef HATEMON_TESTS_PREPROCESS_CASES_H_
#define HATEMON_TESTS_PREPROCESS_CASES_H_

#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hatemon/preprocess.h"

namespace hatemon::testing {

struct Case {
  const char* name;
  Language language;
  std::string input;
  std::string expected;
  PreprocessOptions options = {};
};

// Test-name printer (found by argument-dependent lookup).
inline void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

inline PreprocessOptions without(bool PreprocessOptions::*field) {
  PreprocessOptions o;
  o.*field = false;
  return o;
}

inline const std::vector<Case>& preprocess_cases() {
  static const std::vector<Case> kCases = {
      {"url_https", Language::kEn, "Check https://t.co/abc now", "check now"},
      {"url_only", Language::kEn, "http://x.com", ""},
      {"url_www", Language::kEn, "visit www.example.com today",
       "visit today"},
      {"url_upper_scheme", Language::kEn, "HTTPS://T.CO/X ok", "ok"},
      {"url_multiple", Language::kDe, "a http://x b https://y c", "a b c"},
      {"url_inside_token_kept", Language::kEn, "url:https://x",
       "url:https://x"},
      {"url_hindi", Language::kHi, "देखो https://t.co/Ab", "देखो"},
      {"lower_en", Language::kEn, "Hello WORLD", "hello world"},
      {"lower_de_umlaut", Language::kDe, "Straße ÄRGER", "straße ärger"},
      {"lower_greek", Language::kEn, "ΣΟΦΙΑ", "σοφια"},
      {"hi_keeps_case", Language::kHi, "Hello भारत", "Hello भारत"},
      {"hi_keeps_mention_case", Language::kHi, "@PMOIndia जी",
       "@PMOIndia जी"},
      {"digits_single", Language::kEn, "I have 3 cats", "i have number cats"},
      {"digits_runs", Language::kEn, "call 555-1234", "call number-number"},
      {"digits_inside_word", Language::kEn, "abc123def", "abcnumberdef"},
      {"digits_decimal", Language::kEn, "x1.5", "xnumber.number"},
      {"digits_devanagari", Language::kHi, "२०१९ में", "number में"},
      {"digits_mixed_scripts", Language::kHi, "12३४", "number"},
      {"mention_kept", Language::kEn, "@User hi", "@user hi"},
      {"mention_digits", Language::kEn, "@user123 won 42 times!!",
       "@usernumber won number times!!"},
      {"hashtag_kept", Language::kEn, "#Hashtag yes", "#hashtag yes"},
      {"punctuation_kept", Language::kEn, "wow!!! really??? (no)...",
       "wow!!! really??? (no)..."},
      {"emoji_kept", Language::kEn, "good 😀!", "good 😀!"},
      {"whitespace_collapse", Language::kEn, "  a \t b\n c  ", "a b c"},
      {"nbsp_is_space", Language::kDe, "a\xc2\xa0" "b", "a b"},
      {"empty", Language::kEn, "", ""},
      {"blank", Language::kEn, " \t ", ""},
      {"invalid_utf8_passthrough", Language::kEn, "AB\xff\xfe", "ab\xff\xfe"},
      {"opt_keep_urls", Language::kEn, "See HTTP://X.COM", "see http://x.com",
       without(&PreprocessOptions::remove_urls)},
      {"opt_keep_case", Language::kEn, "Hi THERE", "Hi THERE",
       without(&PreprocessOptions::lowercase)},
      {"opt_keep_digits", Language::kEn, "a 12", "a 12",
       without(&PreprocessOptions::normalize_numbers)},
      {"opt_keep_spacing", Language::kEn, " a  b ", " a  b ",
       without(&PreprocessOptions::collapse_whitespace)},
  };
  return kCases;
}

// Random strings drawn from fragments that exercise every rule.
inline std::string random_string(std::mt19937_64& rng) {
  static const std::vector<std::string> kPieces = {
      "a", "Z", "q", "Ä", "ß", "É", "Σ", "İ", "भारत", "है", "०", "९", "7",
      "42", " ", "  ", "\t", "\n", " ", "　", "!", "?", ".", ",",
      "@", "#", "'", "\"", "(", ")", "-", "😀", "http://", "HTTPS://",
      "www.", "WwW.", "t.co/x", "number", "\xff", "\xe0\x80", "\xc3"};
  std::uniform_int_distribution<std::size_t> len(0, 24);
  std::uniform_int_distribution<std::size_t> pick(0, kPieces.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += kPieces[pick(rng)];
  return s;
}

}  // namespace hatemon::testing

#endif  // HATEMON_TESTS_PREPROCESS_CASES_H_
