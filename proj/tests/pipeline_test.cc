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

#include <gtest/gtest.h>

#include <cstdlib>

#include "hatemon/errors.h"
#include "test_support.h"

namespace hatemon {
namespace {

using testing::TempDir;

PipelineConfig parse(const nlohmann::json& j) {
  return parse_config(j.dump(), "/base");
}

TEST(Config, DefaultsAndPathResolution) {
  auto j = testing::test_config(Language::kHi);
  j["train_path"] = "data/train.tsv";
  j["cache_path"] = "/abs/cache.bin";
  j["training"] = {{"num_rounds", 7}};
  j["preprocess"] = {{"lowercase", false}};
  ::unsetenv(kCacheEnvVar);
  const PipelineConfig c = parse(j);
  EXPECT_EQ(c.language, Language::kHi);
  EXPECT_EQ(c.train_path, std::filesystem::path("/base/data/train.tsv"));
  EXPECT_EQ(c.cache_path, std::filesystem::path("/abs/cache.bin"));
  EXPECT_TRUE(c.model_path.empty());
  EXPECT_EQ(c.training.num_rounds, 7);
  EXPECT_EQ(c.training.num_leaves, 31);
  EXPECT_EQ(c.training.learning_rate, 0.1);
  EXPECT_FALSE(c.preprocess.lowercase);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.transformer.output_dim, 768u);
  EXPECT_EQ(c.feature_dim, 1792u);
}

TEST(Config, EnvironmentOverridesCachePath) {
  auto j = testing::test_config(Language::kEn);
  j["cache_path"] = "c.bin";
  ::setenv(kCacheEnvVar, "/tmp/elsewhere.bin", 1);
  const PipelineConfig c = parse(j);
  ::unsetenv(kCacheEnvVar);
  EXPECT_EQ(c.cache_path, std::filesystem::path("/tmp/elsewhere.bin"));
}

TEST(Config, RejectsBadInput) {
  auto expect_config_error = [](nlohmann::json j) {
    EXPECT_THROW(parse(j), ConfigError) << j.dump();
  };
  auto j = testing::test_config(Language::kEn);
  j["bogus"] = 1;
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["language"] = "FR";
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["training"] = {{"num_rounds", 0}};
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["training"] = {{"rounds", 10}};
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["providers"].erase("sentence");
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["providers"]["transformer"]["kind"] = "http_transformer";
  expect_config_error(j);
  j = testing::test_config(Language::kEn);
  j["threads"] = "four";
  expect_config_error(j);
  EXPECT_THROW(parse_config("not json", "/"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ProviderDimensionsMustMatch) {
  EXPECT_THROW(make_providers(parse(testing::test_config(Language::kEn, 768, 512))),
               ConfigError);
  EXPECT_THROW(make_providers(parse(testing::test_config(Language::kEn, 1024, 768))),
               ConfigError);
  auto [t, s] = make_providers(parse(testing::test_config(Language::kEn)));
  EXPECT_EQ(t->output_dim(), 768u);
  EXPECT_EQ(s->output_dim(), 1024u);
}

TEST(Pipeline, UrlOnlyDifferencesGiveIdenticalFeatures) {
  const FeatureExtractor fx(test_embedder(768, 1), test_embedder(1024, 2));
  const auto a = normalize("Look http://a.example/1 now", Language::kEn);
  const auto b = normalize("look   https://b.example/2 NOW", Language::kEn);
  EXPECT_EQ(a, b);
  EXPECT_EQ(fx.extract(a).combined(), fx.extract(b).combined());
}

TEST(Pipeline, PredictionsRoundTrip) {
  TempDir dir;
  const std::vector<PredictionRow> en = {
      {"a", {Label::kHof, Label::kHate, Label::kTin}},
      {"b", {Label::kNot, Label::kNone, Label::kNone}}};
  const std::string text = render_predictions(en, Language::kEn);
  EXPECT_EQ(text,
            "text_id\ttask_1\ttask_2\ttask_3\na\tHOF\tHATE\tTIN\n"
            "b\tNOT\tNONE\tNONE\n");
  testing::write_text(dir / "p.tsv", text);
  const auto back = read_predictions(dir / "p.tsv", Language::kEn);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].labels, en[1].labels);

  const std::vector<PredictionRow> de = {
      {"x", {Label::kHof, Label::kPrfn, Label::kNone}}};
  EXPECT_EQ(render_predictions(de, Language::kDe),
            "text_id\ttask_1\ttask_2\nx\tHOF\tPRFN\n");
  testing::write_text(dir / "bad.tsv", "text_id\ttask_1\ttask_2\nx\tNOT\tHATE\n");
  EXPECT_THROW(read_predictions(dir / "bad.tsv", Language::kDe), DataError);
}

TEST(Pipeline, AlignmentByIdAndMissingIds) {
  const Dataset gold =
      testing::synthetic_dataset(Language::kEn, Split::kTest, 5, 1, "g");
  std::vector<PredictionRow> pred;
  for (auto it = gold.rows().rbegin(); it != gold.rows().rend(); ++it) {
    pred.push_back({it->post.id, *it->labels});
  }
  const auto aligned = align_predictions(gold, pred);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    EXPECT_EQ(aligned[i], *gold.rows()[i].labels);
  }
  auto missing = pred;
  missing.erase(missing.begin() + 2);
  try {
    align_predictions(gold, missing);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("g2"), std::string::npos) << e.what();
  }
  auto extra = pred;
  extra.push_back({"zzz", {}});
  EXPECT_THROW(align_predictions(gold, extra), DataError);
}

TEST(Pipeline, TrainCascadeOnSyntheticData) {
  const Dataset train =
      testing::synthetic_dataset(Language::kDe, Split::kTrain, 200, 1, "t");
  const FeatureExtractor fx(test_embedder(768, 7), test_embedder(1024, 8));
  const auto features = featurize(train, fx, {}, 2);
  ASSERT_EQ(features.size(), 200u);
  EXPECT_EQ(features[0].size(), kFeatureDim);
  BoosterConfig booster;
  booster.num_rounds = 20;
  std::ostringstream log;
  const CascadeModel m = train_cascade(train, features, booster, 42, &log);
  EXPECT_FALSE(m.model_c.has_value());
  EXPECT_NE(log.str().find("sub-task B"), std::string::npos);
  const auto pred = predict_cascade(m, features);
  std::vector<LabelSet> gold;
  for (const Row& r : train.rows()) gold.push_back(*r.labels);
  const auto reports = evaluate_cascade(gold, pred, Language::kDe);
  EXPECT_EQ(reports.size(), 2u);
  EXPECT_GE(reports[0].macro_f1, 0.9);
  EXPECT_EQ(reports[1].per_class_f1.at(Label::kNone),
            reports[0].per_class_f1.at(Label::kNot));
}

}  // namespace
}  // namespace hatemon
