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

// Per-task classifiers and the A -> B/C cascade.
//
// Model container layout (little-endian):
//
//   "HMDL" | version u16 | metadata length u32 | canonical JSON metadata
//          | payload length u64 | payload | crc32 u32
//
// The CRC covers every preceding byte. A task model's payload is the
// serialized tree ensemble; a cascade's payload is the concatenation of its
// member containers, each prefixed by a u64 length.

#ifndef HATEMON_MODEL_H_
#define HATEMON_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hatemon/gbdt.h"
#include "hatemon/labels.h"

namespace hatemon {

inline constexpr char kModelMagic[4] = {'H', 'M', 'D', 'L'};
inline constexpr uint16_t kModelVersion = 1;

struct TrainedTaskModel {
  Language language = Language::kEn;
  Task task = Task::kA;
  std::vector<Label> class_list;
  GradientBoostedTrees booster;
  BoosterConfig config;
  std::size_t feature_dim = 0;
  uint64_t seed = 0;
  std::string created_at;  // ISO-8601 UTC
};

// Requires a non-empty training set of equal-width rows, labels drawn from
// the task's classes, and at least two distinct labels. Throws DataError
// otherwise.
TrainedTaskModel train_task_model(std::span<const FeatureRow> features,
                                  std::span<const Label> labels,
                                  Language language, Task task,
                                  const BoosterConfig& config, uint64_t seed);

struct TaskPrediction {
  Label label = Label::kNone;
  // Parallel to the model's class_list.
  std::vector<std::pair<Label, double>> probabilities;
};

// Argmax with ties going to the earlier class in class_list.
std::vector<TaskPrediction> predict_task(const TrainedTaskModel& model,
                                         std::span<const FeatureRow> features);

struct CascadeModel {
  Language language = Language::kEn;
  TrainedTaskModel model_a;
  TrainedTaskModel model_b;
  std::optional<TrainedTaskModel> model_c;  // absent for German

  // Throws DataError when members disagree on language or task, or when
  // model_c presence does not match the language.
  void validate() const;
};

// NOT from model A yields (NOT, NONE, NONE). HOF runs model B, and model C
// unless the language has no sub-task C.
std::vector<LabelSet> predict_cascade(const CascadeModel& cascade,
                                      std::span<const FeatureRow> features);

using AnyModel = std::variant<TrainedTaskModel, CascadeModel>;

std::string encode_model(const TrainedTaskModel& model);
std::string encode_model(const CascadeModel& model);
AnyModel decode_model(std::string_view bytes);

// Atomic: writes a sibling temp file, then renames over `path`.
void save_model(const AnyModel& model, const std::filesystem::path& path);
// Throws IoError when unreadable and FormatError on magic, version or
// checksum failures.
AnyModel load_model(const std::filesystem::path& path);
CascadeModel load_cascade(const std::filesystem::path& path);

// Hex CRC-32 of a saved model file, used to tag evaluation reports.
std::string model_checksum(const std::filesystem::path& path);

}  // namespace hatemon

#endif  // HATEMON_MODEL_H_
