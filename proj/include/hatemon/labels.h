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

// Languages, sub-tasks and label vocabulary shared by every module.

#ifndef HATEMON_LABELS_H_
#define HATEMON_LABELS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hatemon {

enum class Language { kEn, kDe, kHi };

// Sub-task A: HOF vs NOT. Sub-task B: HATE/OFFN/PRFN among HOF posts.
// Sub-task C: TIN/UNT among HOF posts (not defined for German).
enum class Task { kA, kB, kC };

// One enumeration for every label token. The declaration order is also the
// row order of rendered tables (HOF, NOT / HATE, OFFN, PRFN / TIN, UNT, NONE).
enum class Label { kHof, kNot, kHate, kOffn, kPrfn, kTin, kUnt, kNone };

inline constexpr Language kAllLanguages[] = {Language::kEn, Language::kDe,
                                             Language::kHi};

std::string_view to_string(Language language);
std::string_view to_string(Task task);
std::string_view to_string(Label label);

// Parsing is exact and case-sensitive; std::nullopt for unknown tokens.
std::optional<Language> parse_language(std::string_view token);
std::optional<Task> parse_task(std::string_view token);
std::optional<Label> parse_label(std::string_view token);

bool has_task_c(Language language);

// Tasks that exist for a language: A, B and (except German) C.
std::vector<Task> tasks_for(Language language);

// Classes a trained classifier predicts for a task (no NONE).
std::span<const Label> training_classes(Task task);

// Classes scored at evaluation time: the training classes plus NONE for B/C.
std::span<const Label> evaluation_classes(Task task);

// Gold or predicted labels for the three sub-tasks.
struct LabelSet {
  Label task_a = Label::kNot;
  Label task_b = Label::kNone;
  Label task_c = Label::kNone;

  Label for_task(Task task) const;

  // Empty string when the set is consistent for `language`, otherwise a
  // description of the first violated rule.
  std::string violation(Language language) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

}  // namespace hatemon

#endif  // HATEMON_LABELS_H_
