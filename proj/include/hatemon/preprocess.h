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

#ifndef HATEMON_PREPROCESS_H_
#define HATEMON_PREPROCESS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hatemon/corpus.h"
#include "hatemon/labels.h"

namespace hatemon {

// Every rule is on by default. Mentions, punctuation and stop-words are never
// touched, so there is no switch for them.
struct PreprocessOptions {
  bool remove_urls = true;         // tokens starting http:// https:// www.
  bool lowercase = true;           // Unicode lowercase; never applied to HI
  bool normalize_numbers = true;   // digit runs (0-9, U+0966..U+096F) -> number
  bool collapse_whitespace = true; // single spaces, trimmed ends

  friend bool operator==(const PreprocessOptions&,
                         const PreprocessOptions&) = default;
};

// Normalized post text. Only normalize() creates these, which is how the
// embedding layer guarantees it never sees raw text.
class PreprocessedText {
 public:
  const std::string& text() const { return text_; }
  const std::string& source_id() const { return source_id_; }
  Language language() const { return language_; }

  friend bool operator==(const PreprocessedText&,
                         const PreprocessedText&) = default;

 private:
  friend PreprocessedText normalize(std::string_view, Language,
                                    const PreprocessOptions&);
  friend std::vector<PreprocessedText> normalize_batch(
      std::span<const Post>, const PreprocessOptions&);

  PreprocessedText(std::string text, std::string source_id, Language language)
      : text_(std::move(text)), source_id_(std::move(source_id)),
        language_(language) {}

  std::string text_;
  std::string source_id_;
  Language language_;
};

// Total over any byte string. Invalid UTF-8 bytes are passed through.
PreprocessedText normalize(std::string_view text, Language language,
                           const PreprocessOptions& options = {});

std::vector<PreprocessedText> normalize_batch(
    std::span<const Post> posts, const PreprocessOptions& options = {});

}  // namespace hatemon

#endif  // HATEMON_PREPROCESS_H_
