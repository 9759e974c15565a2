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

#include "hatemon/labels.h"

#include <string>

namespace hatemon {

namespace {

constexpr Label kTaskAClasses[] = {Label::kHof, Label::kNot};
constexpr Label kTaskBClasses[] = {Label::kHate, Label::kOffn, Label::kPrfn};
constexpr Label kTaskCClasses[] = {Label::kTin, Label::kUnt};
constexpr Label kTaskBEvalClasses[] = {Label::kHate, Label::kOffn,
                                       Label::kPrfn, Label::kNone};
constexpr Label kTaskCEvalClasses[] = {Label::kTin, Label::kUnt, Label::kNone};

bool contains(std::span<const Label> labels, Label label) {
  for (Label l : labels) {
    if (l == label) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(Language language) {
  switch (language) {
    case Language::kEn: return "EN";
    case Language::kDe: return "DE";
    case Language::kHi: return "HI";
  }
  return "?";
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::kA: return "A";
    case Task::kB: return "B";
    case Task::kC: return "C";
  }
  return "?";
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kHof: return "HOF";
    case Label::kNot: return "NOT";
    case Label::kHate: return "HATE";
    case Label::kOffn: return "OFFN";
    case Label::kPrfn: return "PRFN";
    case Label::kTin: return "TIN";
    case Label::kUnt: return "UNT";
    case Label::kNone: return "NONE";
  }
  return "?";
}

std::optional<Language> parse_language(std::string_view token) {
  for (Language l : kAllLanguages) {
    if (to_string(l) == token) return l;
  }
  return std::nullopt;
}

std::optional<Task> parse_task(std::string_view token) {
  for (Task t : {Task::kA, Task::kB, Task::kC}) {
    if (to_string(t) == token) return t;
  }
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view token) {
  for (Label l : {Label::kHof, Label::kNot, Label::kHate, Label::kOffn,
                  Label::kPrfn, Label::kTin, Label::kUnt, Label::kNone}) {
    if (to_string(l) == token) return l;
  }
  return std::nullopt;
}

bool has_task_c(Language language) { return language != Language::kDe; }

std::vector<Task> tasks_for(Language language) {
  if (has_task_c(language)) return {Task::kA, Task::kB, Task::kC};
  return {Task::kA, Task::kB};
}

std::span<const Label> training_classes(Task task) {
  switch (task) {
    case Task::kA: return kTaskAClasses;
    case Task::kB: return kTaskBClasses;
    case Task::kC: return kTaskCClasses;
  }
  return {};
}

std::span<const Label> evaluation_classes(Task task) {
  switch (task) {
    case Task::kA: return kTaskAClasses;
    case Task::kB: return kTaskBEvalClasses;
    case Task::kC: return kTaskCEvalClasses;
  }
  return {};
}

Label LabelSet::for_task(Task task) const {
  switch (task) {
    case Task::kA: return task_a;
    case Task::kB: return task_b;
    case Task::kC: return task_c;
  }
  return Label::kNone;
}

std::string LabelSet::violation(Language language) const {
  auto describe = [this] {
    return "(" + std::string(to_string(task_a)) + ", " +
           std::string(to_string(task_b)) + ", " +
           std::string(to_string(task_c)) + ")";
  };
  if (!contains(kTaskAClasses, task_a)) {
    return "task_1 must be HOF or NOT in " + describe();
  }
  if (!contains(kTaskBEvalClasses, task_b)) {
    return "task_2 must be HATE, OFFN, PRFN or NONE in " + describe();
  }
  if (!contains(kTaskCEvalClasses, task_c)) {
    return "task_3 must be TIN, UNT or NONE in " + describe();
  }
  if (task_a == Label::kNot) {
    if (task_b != Label::kNone || task_c != Label::kNone) {
      return "NOT posts must carry NONE for task_2 and task_3 in " +
             describe();
    }
    return {};
  }
  if (task_b == Label::kNone) {
    return "HOF posts need a HATE/OFFN/PRFN task_2 label in " + describe();
  }
  if (!has_task_c(language)) {
    if (task_c != Label::kNone) {
      return "German posts have no task_3 label in " + describe();
    }
  } else if (task_c == Label::kNone) {
    return "HOF posts need a TIN/UNT task_3 label in " + describe();
  }
  return {};
}

}  // namespace hatemon
