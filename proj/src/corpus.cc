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

#include "hatemon/corpus.h"

#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>
#include <utility>

#include "hatemon/errors.h"

namespace hatemon {

namespace {

constexpr std::string_view kHeaderUnlabeled = "text_id\ttext";
constexpr std::string_view kHeaderTasksAB = "text_id\ttext\ttask_1\ttask_2";
constexpr std::string_view kHeaderTasksABC =
    "text_id\ttext\ttask_1\ttask_2\ttask_3";

std::size_t column_count(ColumnLayout layout) {
  switch (layout) {
    case ColumnLayout::kUnlabeled: return 2;
    case ColumnLayout::kTasksAB: return 4;
    case ColumnLayout::kTasksABC: return 5;
  }
  return 0;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

Label parse_label_field(std::string_view token, std::string_view column,
                        const std::string& location, std::string_view id) {
  auto label = parse_label(token);
  if (!label) {
    throw DataError(location + " (id " + std::string(id) +
                    "): unknown label '" + std::string(token) + "' in " +
                    std::string(column));
  }
  return *label;
}

std::map<Label, std::size_t> zero_counts(Task task) {
  std::map<Label, std::size_t> counts;
  for (Label l : training_classes(task)) counts[l] = 0;
  return counts;
}

}  // namespace

Dataset::Dataset(Language language, Split split, std::vector<Row> rows,
                 ColumnLayout layout)
    : language_(language), split_(split), rows_(std::move(rows)),
      layout_(layout) {
  if (layout_ == ColumnLayout::kTasksAB && has_task_c(language_)) {
    throw DataError("only German data may omit the task_3 column");
  }
  std::unordered_set<std::string_view> ids;
  ids.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& row = rows_[i];
    const std::string label = "row " + std::to_string(i + 1);
    if (row.post.id.empty()) throw DataError(label + ": empty text_id");
    if (row.post.language != language_) {
      throw DataError(label + " (id " + row.post.id +
                      "): language differs from the dataset language");
    }
    if (row.post.text.find_first_of("\t\n\r") != std::string::npos) {
      throw DataError(label + " (id " + row.post.id +
                      "): text contains a tab or line break");
    }
    if (!ids.insert(row.post.id).second) {
      throw DataError(label + ": duplicate text_id " + row.post.id);
    }
    if (labeled() != row.labels.has_value()) {
      throw DataError(label + " (id " + row.post.id +
                      "): labels present on some rows but not others");
    }
    if (row.labels) {
      std::string why = row.labels->violation(language_);
      if (!why.empty()) {
        throw DataError(label + " (id " + row.post.id +
                        "): inconsistent labels: " + why);
      }
    }
  }
}

Dataset read_dataset(std::istream& in, Language language, Split split,
                     const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(source_name + ": missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ColumnLayout layout;
  if (line == kHeaderTasksABC) {
    layout = ColumnLayout::kTasksABC;
  } else if (line == kHeaderTasksAB) {
    layout = ColumnLayout::kTasksAB;
  } else if (line == kHeaderUnlabeled) {
    layout = ColumnLayout::kUnlabeled;
  } else {
    throw DataError(source_name + ": unexpected header '" + line + "'");
  }
  if (layout == ColumnLayout::kTasksAB && has_task_c(language)) {
    throw DataError(source_name + ": task_3 column is required for " +
                    std::string(to_string(language)));
  }

  const std::size_t expected = column_count(layout);
  std::vector<Row> rows;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string location = where(source_name, line_no);
    auto fields = split_tabs(line);
    if (fields.size() != expected) {
      throw DataError(location + ": expected " + std::to_string(expected) +
                      " columns, found " + std::to_string(fields.size()));
    }
    Row row;
    row.post.id = std::string(fields[0]);
    row.post.text = std::string(fields[1]);
    row.post.language = language;
    if (row.post.id.empty()) throw DataError(location + ": empty text_id");
    if (!seen.insert(row.post.id).second) {
      throw DataError(location + ": duplicate text_id " + row.post.id);
    }
    if (layout != ColumnLayout::kUnlabeled) {
      LabelSet labels;
      labels.task_a = parse_label_field(fields[2], "task_1", location,
                                        row.post.id);
      labels.task_b = parse_label_field(fields[3], "task_2", location,
                                        row.post.id);
      if (layout == ColumnLayout::kTasksABC) {
        labels.task_c = parse_label_field(fields[4], "task_3", location,
                                          row.post.id);
      }
      std::string why = labels.violation(language);
      if (!why.empty()) {
        throw DataError(location + " (id " + row.post.id +
                        "): inconsistent labels: " + why);
      }
      row.labels = labels;
    }
    rows.push_back(std::move(row));
  }
  return Dataset(language, split, std::move(rows), layout);
}

Dataset load_dataset(const std::filesystem::path& path, Language language,
                     Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return read_dataset(in, language, split, path.string());
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  switch (dataset.layout()) {
    case ColumnLayout::kUnlabeled: out << kHeaderUnlabeled; break;
    case ColumnLayout::kTasksAB: out << kHeaderTasksAB; break;
    case ColumnLayout::kTasksABC: out << kHeaderTasksABC; break;
  }
  out << '\n';
  for (const Row& row : dataset.rows()) {
    out << row.post.id << '\t' << row.post.text;
    if (row.labels) {
      out << '\t' << to_string(row.labels->task_a) << '\t'
          << to_string(row.labels->task_b);
      if (dataset.layout() == ColumnLayout::kTasksABC) {
        out << '\t' << to_string(row.labels->task_c);
      }
    }
    out << '\n';
  }
}

std::size_t DatasetStats::total(Task task) const {
  const auto& counts =
      task == Task::kA ? task_a : (task == Task::kB ? task_b : task_c);
  std::size_t sum = 0;
  for (const auto& [label, n] : counts) sum += n;
  return sum;
}

std::size_t DatasetStats::count(Task task, Label label) const {
  const auto& counts =
      task == Task::kA ? task_a : (task == Task::kB ? task_b : task_c);
  auto it = counts.find(label);
  return it == counts.end() ? 0 : it->second;
}

DatasetStats compute_stats(const Dataset& dataset) {
  DatasetStats stats;
  stats.task_a = zero_counts(Task::kA);
  stats.task_b = zero_counts(Task::kB);
  if (has_task_c(dataset.language())) stats.task_c = zero_counts(Task::kC);
  for (const Row& row : dataset.rows()) {
    if (!row.labels) continue;
    ++stats.task_a[row.labels->task_a];
    if (row.labels->task_a != Label::kHof) continue;
    ++stats.task_b[row.labels->task_b];
    if (has_task_c(dataset.language())) ++stats.task_c[row.labels->task_c];
  }
  return stats;
}

std::string render_stats_table(
    Language language,
    const std::vector<std::pair<std::string, DatasetStats>>& columns) {
  std::ostringstream out;
  out << "Language " << to_string(language) << '\n';
  for (Task task : tasks_for(language)) {
    out << "Sub-Task " << to_string(task);
    for (const auto& [header, stats] : columns) out << ' ' << header;
    out << '\n';
    for (Label label : training_classes(task)) {
      out << to_string(label);
      for (const auto& [header, stats] : columns) {
        out << ' ' << stats.count(task, label);
      }
      out << '\n';
    }
    out << "Total";
    for (const auto& [header, stats] : columns) out << ' ' << stats.total(task);
    out << '\n';
  }
  return out.str();
}

std::vector<TaskExample> slice_for_task(const Dataset& dataset, Task task) {
  if (task == Task::kC && !has_task_c(dataset.language())) {
    throw DataError("sub-task C is not defined for " +
                    std::string(to_string(dataset.language())));
  }
  if (!dataset.labeled()) {
    throw DataError("cannot slice an unlabeled dataset for training");
  }
  std::vector<TaskExample> examples;
  const auto& rows = dataset.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LabelSet& labels = *rows[i].labels;
    if (task != Task::kA && labels.task_a != Label::kHof) continue;
    examples.push_back({i, labels.for_task(task)});
  }
  return examples;
}

}  // namespace hatemon
