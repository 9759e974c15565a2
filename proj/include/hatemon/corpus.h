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

// Shared-task corpus ingestion.
//
// Files are UTF-8, tab separated, with a header row:
//
//   text_id <TAB> text <TAB> task_1 <TAB> task_2 <TAB> task_3
//
// German files may drop the task_3 column. A file whose header is just
// `text_id <TAB> text` is ingested unlabeled (rows carry no LabelSet).

#ifndef HATEMON_CORPUS_H_
#define HATEMON_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hatemon/labels.h"

namespace hatemon {

enum class Split { kTrain, kTest };

// Which columns a file carries after `text_id` and `text`.
enum class ColumnLayout {
  kUnlabeled,    // no label columns
  kTasksAB,      // task_1, task_2 (German only)
  kTasksABC,     // task_1, task_2, task_3
};

struct Post {
  std::string id;
  std::string text;  // raw, exactly as ingested
  Language language = Language::kEn;
};

struct Row {
  Post post;
  std::optional<LabelSet> labels;  // absent for unlabeled files
};

// Rows of one language and split, in file order. Immutable once loaded.
class Dataset {
 public:
  // Validates every row (language, unique non-empty ids, label invariants).
  // Throws DataError on the first violation.
  Dataset(Language language, Split split, std::vector<Row> rows,
          ColumnLayout layout);

  Language language() const { return language_; }
  Split split() const { return split_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  ColumnLayout layout() const { return layout_; }
  bool labeled() const { return layout_ != ColumnLayout::kUnlabeled; }

 private:
  Language language_;
  Split split_;
  std::vector<Row> rows_;
  ColumnLayout layout_;
};

Dataset load_dataset(const std::filesystem::path& path, Language language,
                     Split split);
Dataset read_dataset(std::istream& in, Language language, Split split,
                     const std::string& source_name = "<stream>");

// Writes the canonical format. For well-formed LF-terminated input files,
// load followed by write reproduces the file byte for byte.
void write_dataset(const Dataset& dataset, std::ostream& out);

struct DatasetStats {
  std::map<Label, std::size_t> task_a;  // HOF, NOT
  std::map<Label, std::size_t> task_b;  // HATE, OFFN, PRFN
  std::map<Label, std::size_t> task_c;  // TIN, UNT; empty for German

  std::size_t total(Task task) const;
  std::size_t count(Task task, Label label) const;
};

DatasetStats compute_stats(const Dataset& dataset);

// Table-1 style layout: one block per sub-task, one column per dataset.
// `columns` pairs a header (e.g. "Train") with the stats for that column.
std::string render_stats_table(
    Language language,
    const std::vector<std::pair<std::string, DatasetStats>>& columns);

struct TaskExample {
  std::size_t row = 0;  // index into Dataset::rows()
  Label label = Label::kNone;
};

// Training rows for one sub-task. Task A keeps every row; tasks B and C keep
// only gold-HOF rows. Throws DataError for task C on German data or for an
// unlabeled dataset.
std::vector<TaskExample> slice_for_task(const Dataset& dataset, Task task);

}  // namespace hatemon

#endif  // HATEMON_CORPUS_H_
