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

#include "hatemon/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "hatemon/errors.h"

namespace hatemon {

namespace {

using nlohmann::json;

std::size_t index_of(std::span<const Label> class_list, Label label) {
  auto it = std::find(class_list.begin(), class_list.end(), label);
  if (it == class_list.end()) {
    throw DataError("label " + std::string(to_string(label)) +
                    " is not in the class list");
  }
  return static_cast<std::size_t>(it - class_list.begin());
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

uint64_t ConfusionMatrix::total() const {
  uint64_t sum = 0;
  for (const auto& row : counts) {
    for (uint64_t c : row) sum += c;
  }
  return sum;
}

ConfusionMatrix confusion(std::span<const Label> gold,
                          std::span<const Label> pred,
                          std::span<const Label> class_list) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predicted label counts differ (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  }
  ConfusionMatrix cm;
  cm.class_list.assign(class_list.begin(), class_list.end());
  cm.counts.assign(class_list.size(),
                   std::vector<uint64_t>(class_list.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++cm.counts[index_of(class_list, gold[i])][index_of(class_list, pred[i])];
  }
  return cm;
}

PerClassF1 per_class_f1(const ConfusionMatrix& cm) {
  PerClassF1 out;
  const std::size_t k = cm.class_list.size();
  for (std::size_t c = 0; c < k; ++c) {
    uint64_t tp = cm.counts[c][c];
    uint64_t fp = 0;
    uint64_t fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    const double precision = safe_ratio(static_cast<double>(tp),
                                        static_cast<double>(tp + fp));
    const double recall = safe_ratio(static_cast<double>(tp),
                                     static_cast<double>(tp + fn));
    out[cm.class_list[c]] =
        safe_ratio(2.0 * precision * recall, precision + recall);
  }
  return out;
}

double macro_f1(const PerClassF1& per_class, std::span<const Label> class_set) {
  if (class_set.empty()) throw DataError("macro F1 over an empty class set");
  double sum = 0.0;
  for (Label label : class_set) {
    auto it = per_class.find(label);
    if (it == per_class.end()) {
      throw DataError("no F1 value for class " +
                      std::string(to_string(label)));
    }
    sum += it->second;
  }
  return sum / static_cast<double>(class_set.size());
}

std::vector<EvaluationReport> evaluate_cascade(std::span<const LabelSet> gold,
                                               std::span<const LabelSet> pred,
                                               Language language) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predicted row counts differ (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  }
  std::vector<EvaluationReport> reports;
  for (Task task : tasks_for(language)) {
    std::vector<Label> g;
    std::vector<Label> p;
    g.reserve(gold.size());
    p.reserve(pred.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
      g.push_back(gold[i].for_task(task));
      p.push_back(pred[i].for_task(task));
    }
    const auto classes = evaluation_classes(task);
    const ConfusionMatrix cm = confusion(g, p, classes);
    EvaluationReport report;
    report.language = language;
    report.task = task;
    report.per_class_f1 = per_class_f1(cm);
    report.macro_f1 = macro_f1(report.per_class_f1, classes);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      uint64_t support = 0;
      for (uint64_t n : cm.counts[c]) support += n;
      report.support[classes[c]] = support;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string format_score(double value) {
  // Strip binary noise below 1e-8 so that e.g. (0.36 + 0.87) / 2 is seen as
  // the decimal tie 61.5 hundredths rather than 61.4999...
  const double cents = std::round(value * 100.0 * 1e6) / 1e6;
  const double floor_cents = std::floor(cents);
  double rounded;
  if (cents - floor_cents == 0.5) {
    rounded = std::fmod(floor_cents, 2.0) == 0.0 ? floor_cents
                                                 : floor_cents + 1.0;
  } else {
    rounded = std::round(cents);
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", rounded / 100.0);
  return buf;
}

std::string render_report(const std::vector<EvaluationReport>& reports,
                          ReportFormat format, const ReportContext& context) {
  if (format == ReportFormat::kJson) {
    json doc = json::array();
    for (const auto& r : reports) {
      json per_class = json::object();
      json support = json::object();
      for (const auto& [label, f1] : r.per_class_f1) {
        per_class[std::string(to_string(label))] = f1;
      }
      for (const auto& [label, n] : r.support) {
        support[std::string(to_string(label))] = n;
      }
      doc.push_back({{"language", to_string(r.language)},
                     {"task", to_string(r.task)},
                     {"per_class_f1", per_class},
                     {"macro_f1", r.macro_f1},
                     {"support", support},
                     {"pipeline_version", context.pipeline_version},
                     {"model_checksums", context.model_checksums}});
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (i > 0) out << '\n';
    out << "Sub-task " << to_string(r.task) << " (" << to_string(r.language)
        << ")\n";
    for (const auto& [label, f1] : r.per_class_f1) {
      out << to_string(label) << ' ' << format_score(f1) << '\n';
    }
    out << "Total " << format_score(r.macro_f1) << '\n';
  }
  return out.str();
}

std::vector<EvaluationReport> parse_json_reports(const std::string& text) {
  std::vector<EvaluationReport> reports;
  try {
    const json doc = json::parse(text);
    for (const auto& item : doc) {
      EvaluationReport r;
      auto language = parse_language(item.at("language").get<std::string>());
      auto task = parse_task(item.at("task").get<std::string>());
      if (!language || !task) throw DataError("bad language or task in report");
      r.language = *language;
      r.task = *task;
      for (const auto& [key, value] : item.at("per_class_f1").items()) {
        auto label = parse_label(key);
        if (!label) throw DataError("bad label " + key + " in report");
        r.per_class_f1[*label] = value.get<double>();
      }
      for (const auto& [key, value] : item.at("support").items()) {
        auto label = parse_label(key);
        if (!label) throw DataError("bad label " + key + " in report");
        r.support[*label] = value.get<uint64_t>();
      }
      r.macro_f1 = item.at("macro_f1").get<double>();
      reports.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
  return reports;
}

}  // namespace hatemon
