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

#include "hatemon/model.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <json.hpp>
#include <set>

#include "hatemon/digest.h"
#include "hatemon/errors.h"
#include "hatemon/file_util.h"

namespace hatemon {

namespace {

using nlohmann::json;

constexpr std::size_t kMinContainer = 4 + 2 + 4 + 8 + 4;

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_to_json(const BoosterConfig& c) {
  return {{"num_rounds", c.num_rounds},
          {"learning_rate", c.learning_rate},
          {"num_leaves", c.num_leaves},
          {"min_data_in_leaf", c.min_data_in_leaf},
          {"min_sum_hessian_in_leaf", c.min_sum_hessian_in_leaf},
          {"lambda_l2", c.lambda_l2},
          {"min_gain_to_split", c.min_gain_to_split},
          {"max_bin", c.max_bin},
          {"bagging_fraction", c.bagging_fraction},
          {"feature_fraction", c.feature_fraction}};
}

BoosterConfig config_from_json(const json& j) {
  BoosterConfig c;
  c.num_rounds = j.at("num_rounds").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.num_leaves = j.at("num_leaves").get<int>();
  c.min_data_in_leaf = j.at("min_data_in_leaf").get<int>();
  c.min_sum_hessian_in_leaf = j.at("min_sum_hessian_in_leaf").get<double>();
  c.lambda_l2 = j.at("lambda_l2").get<double>();
  c.min_gain_to_split = j.at("min_gain_to_split").get<double>();
  c.max_bin = j.at("max_bin").get<int>();
  c.bagging_fraction = j.at("bagging_fraction").get<double>();
  c.feature_fraction = j.at("feature_fraction").get<double>();
  return c;
}

std::string container(const json& metadata, std::string_view payload) {
  const std::string meta = metadata.dump();  // keys sorted: canonical
  std::string out(kModelMagic, sizeof(kModelMagic));
  put_le<uint16_t>(out, kModelVersion);
  put_le<uint32_t>(out, static_cast<uint32_t>(meta.size()));
  out += meta;
  put_le<uint64_t>(out, payload.size());
  out += payload;
  put_le<uint32_t>(out, crc32(out));
  return out;
}

struct Container {
  json metadata;
  std::string_view payload;
};

Container open_container(std::string_view bytes) {
  if (bytes.size() < sizeof(kModelMagic) ||
      bytes.substr(0, sizeof(kModelMagic)) !=
          std::string_view(kModelMagic, sizeof(kModelMagic))) {
    throw FormatError("not a model file (bad magic)");
  }
  if (bytes.size() < 6) throw FormatError("model file is truncated");
  const auto version = get_le<uint16_t>(bytes.data() + 4);
  if (version != kModelVersion) {
    throw FormatError("model format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelVersion) + ")");
  }
  if (bytes.size() < kMinContainer ||
      crc32(bytes.substr(0, bytes.size() - 4)) !=
          get_le<uint32_t>(bytes.data() + bytes.size() - 4)) {
    throw FormatError("model checksum mismatch (file corrupt or truncated)");
  }
  std::size_t pos = 6;
  const auto meta_len = get_le<uint32_t>(bytes.data() + pos);
  pos += 4;
  if (bytes.size() - 4 - pos < meta_len + 8ull) {
    throw FormatError("model metadata overruns the file");
  }
  Container c;
  try {
    c.metadata = json::parse(bytes.substr(pos, meta_len));
  } catch (const json::exception& e) {
    throw FormatError(std::string("model metadata is not JSON: ") + e.what());
  }
  pos += meta_len;
  const auto payload_len = get_le<uint64_t>(bytes.data() + pos);
  pos += 8;
  if (bytes.size() - 4 - pos != payload_len) {
    throw FormatError("model payload length mismatch");
  }
  c.payload = bytes.substr(pos, payload_len);
  return c;
}

template <typename T, typename Parse>
T parse_field(const json& meta, const char* key, Parse parse) {
  auto value = parse(meta.at(key).get<std::string>());
  if (!value) throw FormatError(std::string("bad ") + key + " in metadata");
  return *value;
}

TrainedTaskModel decode_task(const Container& c) {
  TrainedTaskModel m;
  try {
    m.language = parse_field<Language>(c.metadata, "language", parse_language);
    m.task = parse_field<Task>(c.metadata, "task", parse_task);
    for (const auto& tok : c.metadata.at("class_list")) {
      auto label = parse_label(tok.get<std::string>());
      if (!label) throw FormatError("bad class label in metadata");
      m.class_list.push_back(*label);
    }
    m.config = config_from_json(c.metadata.at("config"));
    m.feature_dim = c.metadata.at("feature_dim").get<std::size_t>();
    m.seed = c.metadata.at("seed").get<uint64_t>();
    m.created_at = c.metadata.at("created_at").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("incomplete model metadata: ") + e.what());
  }
  m.booster = GradientBoostedTrees::deserialize(c.payload);
  const auto expected = training_classes(m.task);
  if (!std::equal(m.class_list.begin(), m.class_list.end(), expected.begin(),
                  expected.end())) {
    throw FormatError("class list does not match the task");
  }
  if (m.booster.num_features() != m.feature_dim ||
      m.booster.num_classes() != static_cast<int>(m.class_list.size())) {
    throw FormatError("ensemble shape disagrees with metadata");
  }
  return m;
}

void check_rows(const TrainedTaskModel& model,
                std::span<const FeatureRow> features) {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != model.feature_dim) {
      throw DataError("feature dimension mismatch at row " +
                      std::to_string(i) + ": model expects " +
                      std::to_string(model.feature_dim) + ", got " +
                      std::to_string(features[i].size()));
    }
  }
}

}  // namespace

TrainedTaskModel train_task_model(std::span<const FeatureRow> features,
                                  std::span<const Label> labels,
                                  Language language, Task task,
                                  const BoosterConfig& config, uint64_t seed) {
  if (task == Task::kC && !has_task_c(language)) {
    throw DataError("sub-task C is not defined for " +
                    std::string(to_string(language)));
  }
  if (features.empty()) throw DataError("empty training set");
  if (features.size() != labels.size()) {
    throw DataError("feature and label counts differ");
  }
  const std::size_t dim = features.front().size();
  for (const auto& row : features) {
    if (row.size() != dim) {
      throw DataError("feature dimension mismatch in training set: " +
                      std::to_string(row.size()) + " vs " +
                      std::to_string(dim));
    }
  }
  const auto classes = training_classes(task);
  std::vector<int> indices;
  indices.reserve(labels.size());
  std::set<int> distinct;
  for (Label label : labels) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) {
      throw DataError("label " + std::string(to_string(label)) +
                      " is not a sub-task " + std::string(to_string(task)) +
                      " class");
    }
    indices.push_back(static_cast<int>(it - classes.begin()));
    distinct.insert(indices.back());
  }
  if (distinct.size() < 2) {
    throw DataError("training set for sub-task " +
                    std::string(to_string(task)) + " has a single class");
  }

  TrainedTaskModel model;
  model.language = language;
  model.task = task;
  model.class_list.assign(classes.begin(), classes.end());
  model.config = config;
  model.feature_dim = dim;
  model.seed = seed;
  model.created_at = utc_now();
  model.booster = GradientBoostedTrees::fit(
      features, indices, static_cast<int>(classes.size()), config, seed);
  return model;
}

std::vector<TaskPrediction> predict_task(const TrainedTaskModel& model,
                                         std::span<const FeatureRow> features) {
  check_rows(model, features);
  std::vector<TaskPrediction> out;
  out.reserve(features.size());
  for (const auto& row : features) {
    const std::vector<double> probs = model.booster.predict_proba(row);
    TaskPrediction p;
    std::size_t best = 0;
    for (std::size_t c = 0; c < probs.size(); ++c) {
      p.probabilities.emplace_back(model.class_list[c], probs[c]);
      if (probs[c] > probs[best]) best = c;
    }
    p.label = model.class_list[best];
    out.push_back(std::move(p));
  }
  return out;
}

void CascadeModel::validate() const {
  auto check = [this](const TrainedTaskModel& m, Task task) {
    if (m.language != language || m.task != task) {
      throw DataError("cascade member for sub-task " +
                      std::string(to_string(task)) +
                      " has the wrong language or task");
    }
  };
  check(model_a, Task::kA);
  check(model_b, Task::kB);
  if (model_c.has_value() != has_task_c(language)) {
    throw DataError(has_task_c(language)
                        ? "cascade is missing its sub-task C model"
                        : "German cascades cannot carry a sub-task C model");
  }
  if (model_c) check(*model_c, Task::kC);
  if (model_b.feature_dim != model_a.feature_dim ||
      (model_c && model_c->feature_dim != model_a.feature_dim)) {
    throw DataError("cascade members disagree on feature dimension");
  }
}

std::vector<LabelSet> predict_cascade(const CascadeModel& cascade,
                                      std::span<const FeatureRow> features) {
  cascade.validate();
  check_rows(cascade.model_a, features);
  const auto gate = predict_task(cascade.model_a, features);
  std::vector<FeatureRow> hof_rows;
  std::vector<std::size_t> hof_index;
  for (std::size_t i = 0; i < gate.size(); ++i) {
    if (gate[i].label == Label::kHof) {
      hof_rows.push_back(features[i]);
      hof_index.push_back(i);
    }
  }
  std::vector<LabelSet> out(features.size());  // defaults to NOT/NONE/NONE
  const auto b = predict_task(cascade.model_b, hof_rows);
  std::vector<TaskPrediction> c;
  if (cascade.model_c) c = predict_task(*cascade.model_c, hof_rows);
  for (std::size_t j = 0; j < hof_index.size(); ++j) {
    LabelSet& labels = out[hof_index[j]];
    labels.task_a = Label::kHof;
    labels.task_b = b[j].label;
    labels.task_c = cascade.model_c ? c[j].label : Label::kNone;
  }
  return out;
}

std::string encode_model(const TrainedTaskModel& model) {
  json classes = json::array();
  for (Label l : model.class_list) classes.push_back(to_string(l));
  json meta = {{"kind", "task"},
               {"language", to_string(model.language)},
               {"task", to_string(model.task)},
               {"class_list", classes},
               {"seed", model.seed},
               {"config", config_to_json(model.config)},
               {"feature_dim", model.feature_dim},
               {"created_at", model.created_at}};
  return container(meta, model.booster.serialize());
}

std::string encode_model(const CascadeModel& model) {
  model.validate();
  json tasks = json::array();
  std::string payload;
  auto add = [&](const TrainedTaskModel& m) {
    const std::string inner = encode_model(m);
    tasks.push_back(to_string(m.task));
    put_le<uint64_t>(payload, inner.size());
    payload += inner;
  };
  add(model.model_a);
  add(model.model_b);
  if (model.model_c) add(*model.model_c);
  json meta = {{"kind", "cascade"},
               {"language", to_string(model.language)},
               {"tasks", tasks},
               {"feature_dim", model.model_a.feature_dim},
               {"created_at", model.model_a.created_at}};
  return container(meta, payload);
}

AnyModel decode_model(std::string_view bytes) {
  const Container c = open_container(bytes);
  std::string kind;
  try {
    kind = c.metadata.at("kind").get<std::string>();
  } catch (const json::exception&) {
    throw FormatError("model metadata lacks a kind");
  }
  if (kind == "task") return decode_task(c);
  if (kind != "cascade") throw FormatError("unknown model kind " + kind);

  CascadeModel cascade;
  try {
    cascade.language =
        parse_field<Language>(c.metadata, "language", parse_language);
  } catch (const json::exception& e) {
    throw FormatError(std::string("incomplete cascade metadata: ") + e.what());
  }
  std::vector<TrainedTaskModel> members;
  std::string_view rest = c.payload;
  while (!rest.empty()) {
    if (rest.size() < 8) throw FormatError("cascade payload is truncated");
    const auto len = get_le<uint64_t>(rest.data());
    rest.remove_prefix(8);
    if (len > rest.size()) throw FormatError("cascade payload is truncated");
    members.push_back(decode_task(open_container(rest.substr(0, len))));
    rest.remove_prefix(len);
  }
  if (members.size() < 2 || members.size() > 3) {
    throw FormatError("cascade must hold two or three task models");
  }
  cascade.model_a = std::move(members[0]);
  cascade.model_b = std::move(members[1]);
  if (members.size() == 3) cascade.model_c = std::move(members[2]);
  try {
    cascade.validate();
  } catch (const DataError& e) {
    throw FormatError(e.what());
  }
  return cascade;
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  const std::string bytes =
      std::visit([](const auto& m) { return encode_model(m); }, model);
  write_file_atomically(path, bytes);
}

AnyModel load_model(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_model(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

CascadeModel load_cascade(const std::filesystem::path& path) {
  AnyModel any = load_model(path);
  if (auto* cascade = std::get_if<CascadeModel>(&any)) {
    return std::move(*cascade);
  }
  throw FormatError(path.string() + " holds a single task model, not a "
                                    "cascade");
}

std::string model_checksum(const std::filesystem::path& path) {
  const uint32_t crc = crc32(read_file(path));
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", crc);
  return buf;
}

}  // namespace hatemon
