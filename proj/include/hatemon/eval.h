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

// Per-class F1, macro F1 and report rendering.

#ifndef HATEMON_EVAL_H_
#define HATEMON_EVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hatemon/labels.h"

namespace hatemon {

struct ConfusionMatrix {
  std::vector<Label> class_list;
  // counts[gold][predicted], indexed by position in class_list.
  std::vector<std::vector<uint64_t>> counts;

  uint64_t total() const;
};

// Throws DataError on length mismatch or a label outside class_list.
ConfusionMatrix confusion(std::span<const Label> gold,
                          std::span<const Label> pred,
                          std::span<const Label> class_list);

using PerClassF1 = std::map<Label, double>;

// One-vs-rest F1 per class; any 0/0 in precision, recall or F1 counts as 0.
PerClassF1 per_class_f1(const ConfusionMatrix& cm);

// Unweighted mean over `class_set`. Throws DataError when the set is empty
// or a class has no entry in `per_class`.
double macro_f1(const PerClassF1& per_class, std::span<const Label> class_set);

struct EvaluationReport {
  Language language = Language::kEn;
  Task task = Task::kA;
  PerClassF1 per_class_f1;
  double macro_f1 = 0.0;
  std::map<Label, uint64_t> support;  // gold count per class
};

// One report per sub-task of the language, over all rows. Gold NOT rows carry
// NONE for B and C, so NONE is scored as a class of its own there.
std::vector<EvaluationReport> evaluate_cascade(std::span<const LabelSet> gold,
                                               std::span<const LabelSet> pred,
                                               Language language);

// Two-decimal display value. Ties are resolved half-to-even on the decimal
// value: 0.615 -> "0.62", 0.345 -> "0.34", 0.275 -> "0.28".
std::string format_score(double value);

enum class ReportFormat { kTextTable, kJson };

struct ReportContext {
  std::string pipeline_version;
  std::map<std::string, std::string> model_checksums;
};

// Text: one block per report with per-class rows then a Total row.
// JSON: an array of full-precision report objects.
std::string render_report(const std::vector<EvaluationReport>& reports,
                          ReportFormat format,
                          const ReportContext& context = {});

// Reads back the JSON rendering.
std::vector<EvaluationReport> parse_json_reports(const std::string& text);

}  // namespace hatemon

#endif  // HATEMON_EVAL_H_
