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

#include "hatemon/preprocess.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace hatemon {

namespace {

// A decoded code point, or a raw byte that was not valid UTF-8 (cp < 0).
struct Unit {
  UChar32 cp;
  char raw;
};

std::vector<Unit> decode(std::string_view text) {
  std::vector<Unit> units;
  units.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0) {
      // Re-emit every byte of the bad sequence untouched.
      for (int32_t j = start; j < i; ++j) units.push_back({-1, text[j]});
    } else {
      units.push_back({cp, 0});
    }
  }
  return units;
}

void append(std::string& out, const Unit& unit) {
  if (unit.cp < 0) {
    out.push_back(unit.raw);
    return;
  }
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, unit.cp);
  out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
}

bool is_space(const Unit& u) { return u.cp >= 0 && u_isUWhiteSpace(u.cp); }

bool is_digit(const Unit& u) {
  return (u.cp >= '0' && u.cp <= '9') || (u.cp >= 0x0966 && u.cp <= 0x096F);
}

UChar32 ascii_lower(UChar32 cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp - 'A' + 'a' : cp;
}

bool starts_with_ci(const std::vector<Unit>& units, size_t begin, size_t end,
                    std::string_view prefix) {
  if (end - begin < prefix.size()) return false;
  for (size_t k = 0; k < prefix.size(); ++k) {
    if (ascii_lower(units[begin + k].cp) != static_cast<UChar32>(prefix[k])) {
      return false;
    }
  }
  return true;
}

bool is_url_token(const std::vector<Unit>& units, size_t begin, size_t end) {
  return starts_with_ci(units, begin, end, "http://") ||
         starts_with_ci(units, begin, end, "https://") ||
         starts_with_ci(units, begin, end, "www.");
}

std::vector<Unit> drop_urls(const std::vector<Unit>& units) {
  std::vector<Unit> kept;
  kept.reserve(units.size());
  size_t i = 0;
  while (i < units.size()) {
    if (is_space(units[i])) {
      kept.push_back(units[i++]);
      continue;
    }
    size_t end = i;
    while (end < units.size() && !is_space(units[end])) ++end;
    if (!is_url_token(units, i, end)) {
      kept.insert(kept.end(), units.begin() + static_cast<ptrdiff_t>(i),
                  units.begin() + static_cast<ptrdiff_t>(end));
    }
    i = end;
  }
  return kept;
}

}  // namespace

PreprocessedText normalize(std::string_view text, Language language,
                           const PreprocessOptions& options) {
  std::vector<Unit> units = decode(text);
  if (options.remove_urls) units = drop_urls(units);

  // Devanagari has no case, and HI posts keep any Latin case as written.
  if (options.lowercase && language != Language::kHi) {
    for (Unit& u : units) {
      if (u.cp >= 0) u.cp = u_tolower(u.cp);
    }
  }

  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (size_t i = 0; i < units.size();) {
    const Unit& u = units[i];
    if (options.collapse_whitespace && is_space(u)) {
      pending_space = !out.empty();
      ++i;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (options.normalize_numbers && is_digit(u)) {
      while (i < units.size() && is_digit(units[i])) ++i;
      out += "number";
      continue;
    }
    append(out, u);
    ++i;
  }
  return PreprocessedText(std::move(out), std::string(), language);
}

std::vector<PreprocessedText> normalize_batch(
    std::span<const Post> posts, const PreprocessOptions& options) {
  std::vector<PreprocessedText> out;
  out.reserve(posts.size());
  for (const Post& post : posts) {
    PreprocessedText t = normalize(post.text, post.language, options);
    t.source_id_ = post.id;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace hatemon
