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

#include "hatemon/pipeline.h"

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hatemon/errors.h"
#include "hatemon/file_util.h"
#include "hatemon/remote_provider.h"

namespace hatemon {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown config key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out,
              const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config value " + where + "." + key +
                      " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

ProviderConfig parse_provider(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(obj,
                      {"kind", "provider_id", "output_dim", "seed", "endpoint",
                       "path", "timeout_seconds", "pooling", "encoder_layers",
                       "pooled_layers", "max_tokens"},
                      where);
  ProviderConfig p;
  std::string kind = "test";
  read_opt(obj, "kind", kind, where);
  if (kind == "test") {
    p.kind = ProviderConfig::Kind::kTest;
  } else if (kind == "http_transformer") {
    p.kind = ProviderConfig::Kind::kHttpTransformer;
  } else if (kind == "http_sentence") {
    p.kind = ProviderConfig::Kind::kHttpSentence;
  } else {
    throw ConfigError(where + ".kind must be test, http_transformer or "
                              "http_sentence");
  }
  read_opt(obj, "provider_id", p.provider_id, where);
  read_opt(obj, "output_dim", p.output_dim, where);
  read_opt(obj, "seed", p.seed, where);
  read_opt(obj, "endpoint", p.endpoint, where);
  read_opt(obj, "path", p.path, where);
  read_opt(obj, "timeout_seconds", p.timeout_seconds, where);
  std::string pooling = "token_mean";
  read_opt(obj, "pooling", pooling, where);
  if (pooling == "token_mean") {
    p.pooling.mode = PoolingMode::kTokenMean;
  } else if (pooling == "first_token") {
    p.pooling.mode = PoolingMode::kFirstToken;
  } else {
    throw ConfigError(where + ".pooling must be token_mean or first_token");
  }
  read_opt(obj, "encoder_layers", p.pooling.encoder_layers, where);
  read_opt(obj, "pooled_layers", p.pooling.pooled_layers, where);
  read_opt(obj, "max_tokens", p.pooling.max_tokens, where);
  if (p.output_dim == 0) throw ConfigError(where + ".output_dim is required");
  if (p.kind != ProviderConfig::Kind::kTest) {
    if (p.provider_id.empty() || p.endpoint.empty() || p.path.empty()) {
      throw ConfigError(where + " needs provider_id, endpoint and path");
    }
  }
  return p;
}

std::shared_ptr<const EmbeddingProvider> build_provider(
    const ProviderConfig& p) {
  switch (p.kind) {
    case ProviderConfig::Kind::kTest:
      return test_embedder(p.output_dim, p.seed);
    case ProviderConfig::Kind::kHttpTransformer:
      return std::make_shared<HttpTransformerProvider>(
          p.provider_id, HttpEndpoint{p.endpoint, p.path, p.timeout_seconds},
          p.pooling, p.output_dim);
    case ProviderConfig::Kind::kHttpSentence:
      return std::make_shared<HttpSentenceProvider>(
          p.provider_id, HttpEndpoint{p.endpoint, p.path, p.timeout_seconds},
          p.output_dim);
  }
  throw ConfigError("unknown provider kind");
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text,
                            const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"language", "train_path", "test_path", "cache_path",
                       "model_path", "report_dir", "providers", "feature_dim",
                       "training", "seed", "preprocess", "threads"},
                      "config");
  PipelineConfig c;
  std::string language;
  read_opt(doc, "language", language, "config");
  auto parsed = parse_language(language);
  if (!parsed) throw ConfigError("config.language must be EN, DE or HI");
  c.language = *parsed;

  std::string path;
  auto read_path = [&](const char* key, std::filesystem::path& out) {
    path.clear();
    read_opt(doc, key, path, "config");
    out = resolve(base_dir, path);
  };
  read_path("train_path", c.train_path);
  read_path("test_path", c.test_path);
  read_path("cache_path", c.cache_path);
  read_path("model_path", c.model_path);
  read_path("report_dir", c.report_dir);
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) {
    c.cache_path = env;
  }

  read_opt(doc, "feature_dim", c.feature_dim, "config");
  read_opt(doc, "seed", c.seed, "config");
  read_opt(doc, "threads", c.threads, "config");
  if (c.threads == 0) throw ConfigError("config.threads must be >= 1");

  auto providers = doc.find("providers");
  if (providers == doc.end() || !providers->is_object()) {
    throw ConfigError("config.providers with transformer and sentence "
                      "entries is required");
  }
  reject_unknown_keys(*providers, {"transformer", "sentence"},
                      "config.providers");
  if (!providers->contains("transformer") || !providers->contains("sentence")) {
    throw ConfigError("config.providers needs transformer and sentence");
  }
  c.transformer =
      parse_provider(providers->at("transformer"), "providers.transformer");
  c.sentence = parse_provider(providers->at("sentence"), "providers.sentence");

  if (auto t = doc.find("training"); t != doc.end()) {
    if (!t->is_object()) throw ConfigError("config.training must be an object");
    reject_unknown_keys(*t,
                        {"num_rounds", "learning_rate", "num_leaves",
                         "min_data_in_leaf", "min_sum_hessian_in_leaf",
                         "lambda_l2", "min_gain_to_split", "max_bin",
                         "bagging_fraction", "feature_fraction"},
                        "config.training");
    auto& b = c.training;
    read_opt(*t, "num_rounds", b.num_rounds, "training");
    read_opt(*t, "learning_rate", b.learning_rate, "training");
    read_opt(*t, "num_leaves", b.num_leaves, "training");
    read_opt(*t, "min_data_in_leaf", b.min_data_in_leaf, "training");
    read_opt(*t, "min_sum_hessian_in_leaf", b.min_sum_hessian_in_leaf,
             "training");
    read_opt(*t, "lambda_l2", b.lambda_l2, "training");
    read_opt(*t, "min_gain_to_split", b.min_gain_to_split, "training");
    read_opt(*t, "max_bin", b.max_bin, "training");
    read_opt(*t, "bagging_fraction", b.bagging_fraction, "training");
    read_opt(*t, "feature_fraction", b.feature_fraction, "training");
  }
  c.training.validate();

  if (auto pp = doc.find("preprocess"); pp != doc.end()) {
    if (!pp->is_object()) {
      throw ConfigError("config.preprocess must be an object");
    }
    reject_unknown_keys(*pp,
                        {"remove_urls", "lowercase", "normalize_numbers",
                         "collapse_whitespace"},
                        "config.preprocess");
    read_opt(*pp, "remove_urls", c.preprocess.remove_urls, "preprocess");
    read_opt(*pp, "lowercase", c.preprocess.lowercase, "preprocess");
    read_opt(*pp, "normalize_numbers", c.preprocess.normalize_numbers,
             "preprocess");
    read_opt(*pp, "collapse_whitespace", c.preprocess.collapse_whitespace,
             "preprocess");
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError&) {
    throw ConfigError("cannot read config " + path.string());
  }
  return parse_config(text, path.parent_path());
}

std::pair<std::shared_ptr<const EmbeddingProvider>,
          std::shared_ptr<const EmbeddingProvider>>
make_providers(const PipelineConfig& config) {
  if (config.transformer.output_dim + config.sentence.output_dim !=
      config.feature_dim) {
    throw ConfigError("provider dimensions (" +
                      std::to_string(config.transformer.output_dim) + ", " +
                      std::to_string(config.sentence.output_dim) +
                      ") do not sum to feature_dim " +
                      std::to_string(config.feature_dim));
  }
  if (config.transformer.output_dim != kTransformerDim ||
      config.sentence.output_dim != kSentenceDim) {
    throw ConfigError("provider dimensions must be (768, 1024), got (" +
                      std::to_string(config.transformer.output_dim) + ", " +
                      std::to_string(config.sentence.output_dim) + ")");
  }
  return {build_provider(config.transformer), build_provider(config.sentence)};
}

std::vector<FeatureRow> featurize(const Dataset& dataset,
                                  const FeatureExtractor& extractor,
                                  const PreprocessOptions& options,
                                  std::size_t threads) {
  std::vector<Post> posts;
  posts.reserve(dataset.size());
  for (const Row& row : dataset.rows()) posts.push_back(row.post);
  const auto texts = normalize_batch(posts, options);
  auto vectors = extractor.extract_batch(texts, threads);
  std::vector<FeatureRow> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(v.combined());
  return rows;
}

CascadeModel train_cascade(const Dataset& dataset,
                           std::span<const FeatureRow> features,
                           const BoosterConfig& booster, uint64_t seed,
                           std::ostream* log) {
  if (features.size() != dataset.size()) {
    throw DataError("feature rows do not align with dataset rows");
  }
  auto train_one = [&](Task task) {
    const auto slice = slice_for_task(dataset, task);
    std::vector<FeatureRow> x;
    std::vector<Label> y;
    x.reserve(slice.size());
    y.reserve(slice.size());
    std::map<Label, std::size_t> counts;
    for (const auto& ex : slice) {
      x.push_back(features[ex.row]);
      y.push_back(ex.label);
      ++counts[ex.label];
    }
    TrainedTaskModel model =
        train_task_model(x, y, dataset.language(), task, booster, seed);
    if (log) {
      *log << "sub-task " << to_string(task) << ": " << slice.size()
           << " rows";
      for (const auto& [label, n] : counts) {
        *log << ' ' << to_string(label) << '=' << n;
      }
      *log << ", " << model.booster.num_trees() << " trees\n";
    }
    return model;
  };
  CascadeModel cascade;
  cascade.language = dataset.language();
  cascade.model_a = train_one(Task::kA);
  cascade.model_b = train_one(Task::kB);
  if (has_task_c(dataset.language())) cascade.model_c = train_one(Task::kC);
  cascade.validate();
  return cascade;
}

std::string render_predictions(const std::vector<PredictionRow>& rows,
                               Language language) {
  const bool with_c = has_task_c(language);
  std::ostringstream out;
  out << "text_id\ttask_1\ttask_2";
  if (with_c) out << "\ttask_3";
  out << '\n';
  for (const auto& row : rows) {
    out << row.id << '\t' << to_string(row.labels.task_a) << '\t'
        << to_string(row.labels.task_b);
    if (with_c) out << '\t' << to_string(row.labels.task_c);
    out << '\n';
  }
  return out.str();
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path,
                                            Language language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open predictions " + path.string());
  const bool with_c = has_task_c(language);
  const std::string expected_header =
      with_c ? "text_id\ttask_1\ttask_2\ttask_3" : "text_id\ttask_1\ttask_2";
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw DataError(path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<PredictionRow> rows;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto fields = split_tabs(line);
    if (fields.size() != (with_c ? 4u : 3u)) {
      throw DataError(where + ": wrong column count");
    }
    PredictionRow row;
    row.id = std::string(fields[0]);
    if (row.id.empty()) throw DataError(where + ": empty text_id");
    if (!seen.insert(row.id).second) {
      throw DataError(where + ": duplicate text_id " + row.id);
    }
    auto label = [&](std::size_t i) {
      auto l = parse_label(fields[i]);
      if (!l) {
        throw DataError(where + ": unknown label '" + std::string(fields[i]) +
                        "'");
      }
      return *l;
    };
    row.labels.task_a = label(1);
    row.labels.task_b = label(2);
    if (with_c) row.labels.task_c = label(3);
    if (auto why = row.labels.violation(language); !why.empty()) {
      throw DataError(where + ": inconsistent labels: " + why);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LabelSet> align_predictions(
    const Dataset& gold, const std::vector<PredictionRow>& pred) {
  std::unordered_map<std::string_view, const LabelSet*> by_id;
  for (const auto& row : pred) by_id.emplace(row.id, &row.labels);
  std::vector<LabelSet> aligned;
  aligned.reserve(gold.size());
  std::set<std::string_view> gold_ids;
  for (const Row& row : gold.rows()) {
    auto it = by_id.find(row.post.id);
    if (it == by_id.end()) {
      throw DataError("text_id " + row.post.id +
                      " has no prediction (first divergent id)");
    }
    aligned.push_back(*it->second);
    gold_ids.insert(row.post.id);
  }
  for (const auto& row : pred) {
    if (!gold_ids.count(row.id)) {
      throw DataError("predicted text_id " + row.id +
                      " is not in the gold file (first divergent id)");
    }
  }
  return aligned;
}

}  // namespace hatemon
