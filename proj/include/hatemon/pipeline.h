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

// End-to-end pipeline: config, featurization, cascade training, prediction
// files and evaluation. Every setting that affects results lives in the JSON
// config so one file fully determines a run.

#ifndef HATEMON_PIPELINE_H_
#define HATEMON_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hatemon/corpus.h"
#include "hatemon/embed.h"
#include "hatemon/eval.h"
#include "hatemon/gbdt.h"
#include "hatemon/model.h"
#include "hatemon/preprocess.h"

namespace hatemon {

inline constexpr char kPipelineVersion[] = "hatemon 1.0.0";

// Environment variable that overrides the configured cache path.
inline constexpr char kCacheEnvVar[] = "HATEMON_CACHE";

inline constexpr uint64_t kDefaultSeed = 42;

struct ProviderConfig {
  enum class Kind { kTest, kHttpTransformer, kHttpSentence };

  Kind kind = Kind::kTest;
  std::string provider_id;  // derived for the test embedder when empty
  std::size_t output_dim = 0;
  uint64_t seed = 0;         // test embedder only
  std::string endpoint;      // http kinds: base URL
  std::string path;          // http kinds: request path
  int timeout_seconds = 60;
  PoolingOptions pooling;    // http transformer only
};

struct PipelineConfig {
  Language language = Language::kEn;
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path cache_path;  // empty: no cache
  std::filesystem::path model_path;
  std::filesystem::path report_dir;
  ProviderConfig transformer;
  ProviderConfig sentence;
  std::size_t feature_dim = kFeatureDim;
  BoosterConfig training;
  uint64_t seed = kDefaultSeed;
  PreprocessOptions preprocess;
  std::size_t threads = 1;
};

// Parses a config document. Relative paths are resolved against `base_dir`.
// Unknown keys and out-of-range values are ConfigErrors. The cache path is
// taken from HATEMON_CACHE when that variable is set.
PipelineConfig parse_config(const std::string& json_text,
                            const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// Builds the two providers. Throws ConfigError unless their dimensions are
// 768 and 1024 and sum to config.feature_dim.
std::pair<std::shared_ptr<const EmbeddingProvider>,
          std::shared_ptr<const EmbeddingProvider>>
make_providers(const PipelineConfig& config);

// Normalizes every post and embeds it; rows align with dataset rows.
std::vector<FeatureRow> featurize(const Dataset& dataset,
                                  const FeatureExtractor& extractor,
                                  const PreprocessOptions& options,
                                  std::size_t threads = 1);

// Trains A, B and (unless German) C on gold slices of `dataset`.
// `features` must align with dataset rows.
CascadeModel train_cascade(const Dataset& dataset,
                           std::span<const FeatureRow> features,
                           const BoosterConfig& booster, uint64_t seed,
                           std::ostream* log = nullptr);

struct PredictionRow {
  std::string id;
  LabelSet labels;
};

// Submission format: header `text_id task_1 task_2 [task_3]` (tab separated),
// task_3 omitted for German.
std::string render_predictions(const std::vector<PredictionRow>& rows,
                               Language language);
std::vector<PredictionRow> read_predictions(const std::filesystem::path& path,
                                            Language language);

// Pairs gold rows with predictions by text_id. Throws DataError naming the
// first id that is missing on either side.
std::vector<LabelSet> align_predictions(const Dataset& gold,
                                        const std::vector<PredictionRow>& pred);

}  // namespace hatemon

#endif  // HATEMON_PIPELINE_H_
