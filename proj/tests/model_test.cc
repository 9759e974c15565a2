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

#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "hatemon/embed.h"
#include "hatemon/errors.h"
#include "hatemon/eval.h"
#include "test_support.h"

namespace hatemon {
namespace {

using testing::TempDir;

BoosterConfig quick() {
  BoosterConfig c;
  c.num_rounds = 20;
  return c;
}

// Rows whose first coordinates encode a class index.
void coded_rows(std::span<const Label> classes, std::size_t n,
                std::size_t dim, uint64_t seed, std::vector<FeatureRow>& rows,
                std::vector<Label>& labels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, 0.3f);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes.size();
    FeatureRow r(dim);
    for (auto& x : r) x = noise(rng);
    r[c] += 3.0f;
    rows.push_back(std::move(r));
    labels.push_back(classes[c]);
  }
}

TEST(Model, SeparableBinaryReachesHighMacroF1) {
  std::vector<FeatureRow> train, test;
  std::vector<Label> ytrain, ytest;
  testing::gaussian_clusters(200, kFeatureDim, 1, train, ytrain);
  testing::gaussian_clusters(50, kFeatureDim, 2, test, ytest);
  const auto m = train_task_model(train, ytrain, Language::kEn, Task::kA,
                                  BoosterConfig{}, 42);
  EXPECT_EQ(m.feature_dim, kFeatureDim);
  EXPECT_EQ(m.class_list, std::vector<Label>({Label::kHof, Label::kNot}));
  const auto pred = predict_task(m, test);
  std::vector<Label> labels;
  for (const auto& p : pred) {
    labels.push_back(p.label);
    double sum = 0.0;
    for (const auto& [l, prob] : p.probabilities) sum += prob;
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
  const auto f1 = per_class_f1(confusion(ytest, labels, m.class_list));
  EXPECT_GE(macro_f1(f1, m.class_list), 0.95);
}

TEST(Model, TrainingPreconditions) {
  std::vector<FeatureRow> rows;
  std::vector<Label> labels;
  testing::gaussian_clusters(40, 8, 1, rows, labels);
  const BoosterConfig c = quick();

  auto mixed = rows;
  mixed[7].pop_back();
  EXPECT_THROW(train_task_model(mixed, labels, Language::kEn, Task::kA, c, 1),
               DataError);
  std::vector<Label> single(rows.size(), Label::kNot);
  EXPECT_THROW(train_task_model(rows, single, Language::kEn, Task::kA, c, 1),
               DataError);
  std::vector<Label> wrong_task = labels;
  wrong_task[0] = Label::kHate;
  EXPECT_THROW(
      train_task_model(rows, wrong_task, Language::kEn, Task::kA, c, 1),
      DataError);
  std::vector<Label> none_in_b(rows.size(), Label::kNone);
  EXPECT_THROW(train_task_model(rows, none_in_b, Language::kEn, Task::kB, c, 1),
               DataError);
  std::vector<Label> c_labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c_labels.push_back(i % 2 ? Label::kTin : Label::kUnt);
  }
  EXPECT_THROW(train_task_model(rows, c_labels, Language::kDe, Task::kC, c, 1),
               DataError);
  EXPECT_NO_THROW(
      train_task_model(rows, c_labels, Language::kHi, Task::kC, c, 1));
  EXPECT_THROW(train_task_model({}, {}, Language::kEn, Task::kA, c, 1),
               DataError);
  labels.pop_back();
  EXPECT_THROW(train_task_model(rows, labels, Language::kEn, Task::kA, c, 1),
               DataError);
}

TEST(Model, MixedFeatureWidthAtTrainingIsRejected) {
  // One 1791-wide row among 1792-wide rows.
  std::vector<FeatureRow> rows;
  std::vector<Label> labels;
  testing::gaussian_clusters(30, kFeatureDim, 3, rows, labels);
  rows[11].resize(kFeatureDim - 1);
  EXPECT_THROW(
      train_task_model(rows, labels, Language::kEn, Task::kA, quick(), 1),
      DataError);
}

TEST(Model, SaveLoadPreservesPredictionsBitExactly) {
  TempDir dir;
  std::vector<FeatureRow> rows, probe;
  std::vector<Label> labels, unused;
  coded_rows(training_classes(Task::kB), 120, 16, 1, rows, labels);
  coded_rows(training_classes(Task::kB), 100, 16, 2, probe, unused);
  const auto m =
      train_task_model(rows, labels, Language::kHi, Task::kB, quick(), 9);
  save_model(m, dir / "b.hmdl");
  const auto loaded = std::get<TrainedTaskModel>(load_model(dir / "b.hmdl"));
  EXPECT_EQ(loaded.class_list, m.class_list);
  EXPECT_EQ(loaded.config, m.config);
  EXPECT_EQ(loaded.seed, 9u);
  EXPECT_EQ(loaded.created_at, m.created_at);
  const auto a = predict_task(m, probe);
  const auto b = predict_task(loaded, probe);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    ASSERT_EQ(a[i].label, b[i].label);
    for (std::size_t k = 0; k < a[i].probabilities.size(); ++k) {
      const double x = a[i].probabilities[k].second;
      const double y = b[i].probabilities[k].second;
      EXPECT_EQ(std::memcmp(&x, &y, sizeof(double)), 0);
    }
  }
  EXPECT_EQ(encode_model(loaded), encode_model(m));
}

TEST(Model, CorruptFilesAreRejected) {
  TempDir dir;
  std::vector<FeatureRow> rows;
  std::vector<Label> labels;
  testing::gaussian_clusters(40, 8, 1, rows, labels);
  const auto m =
      train_task_model(rows, labels, Language::kEn, Task::kA, quick(), 1);
  const std::string bytes = encode_model(m);

  auto error_for = [&](const std::string& content) -> std::string {
    testing::write_text(dir / "m.hmdl", content);
    try {
      load_model(dir / "m.hmdl");
    } catch (const FormatError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(error_for(bytes.substr(0, bytes.size() - 10)).find("checksum"),
            std::string::npos);
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 1;
  EXPECT_NE(error_for(flipped).find("checksum"), std::string::npos);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_NE(error_for(bad_magic).find("magic"), std::string::npos);
  std::string v2 = bytes;
  v2[4] = 2;
  EXPECT_NE(error_for(v2).find("version"), std::string::npos);
  EXPECT_THROW(load_model(dir / "missing.hmdl"), IoError);
}

TEST(Model, PredictRejectsWrongWidth) {
  std::vector<FeatureRow> rows;
  std::vector<Label> labels;
  testing::gaussian_clusters(60, kFeatureDim, 1, rows, labels);
  const auto m =
      train_task_model(rows, labels, Language::kEn, Task::kA, quick(), 1);
  const std::vector<FeatureRow> narrow = {FeatureRow(kSentenceDim, 0.0f)};
  EXPECT_THROW(predict_task(m, narrow), DataError);
}

CascadeModel small_cascade(Language language) {
  std::vector<FeatureRow> rows;
  std::vector<Label> labels;
  coded_rows(training_classes(Task::kA), 60, 10, 1, rows, labels);
  CascadeModel cascade;
  cascade.language = language;
  cascade.model_a =
      train_task_model(rows, labels, language, Task::kA, quick(), 1);
  rows.clear();
  labels.clear();
  coded_rows(training_classes(Task::kB), 60, 10, 2, rows, labels);
  // Shift B/C signal to later coordinates so it does not collide with A.
  for (auto& r : rows) std::rotate(r.begin(), r.begin() + 7, r.end());
  cascade.model_b =
      train_task_model(rows, labels, language, Task::kB, quick(), 1);
  if (has_task_c(language)) {
    rows.clear();
    labels.clear();
    coded_rows(training_classes(Task::kC), 60, 10, 3, rows, labels);
    for (auto& r : rows) std::rotate(r.begin(), r.begin() + 4, r.end());
    cascade.model_c =
        train_task_model(rows, labels, language, Task::kC, quick(), 1);
  }
  return cascade;
}

TEST(Model, CascadeGatesLaterTasks) {
  for (Language language : kAllLanguages) {
    const CascadeModel cascade = small_cascade(language);
    EXPECT_NO_THROW(cascade.validate());
    std::vector<FeatureRow> probe;
    std::vector<Label> unused;
    coded_rows(training_classes(Task::kA), 40, 10, 9, probe, unused);
    const auto out = predict_cascade(cascade, probe);
    int hof = 0;
    for (const LabelSet& l : out) {
      EXPECT_EQ(l.violation(language), "");
      if (l.task_a == Label::kNot) {
        EXPECT_EQ(l.task_b, Label::kNone);
        EXPECT_EQ(l.task_c, Label::kNone);
      } else {
        ++hof;
      }
    }
    EXPECT_GT(hof, 0);
  }
}

TEST(Model, CascadeValidationAndPersistence) {
  TempDir dir;
  CascadeModel en = small_cascade(Language::kEn);
  save_model(en, dir / "en.hmdl");
  const CascadeModel back = load_cascade(dir / "en.hmdl");
  EXPECT_EQ(encode_model(back), encode_model(en));
  EXPECT_EQ(model_checksum(dir / "en.hmdl").size(), 8u);

  CascadeModel de = small_cascade(Language::kDe);
  EXPECT_FALSE(de.model_c.has_value());
  save_model(de, dir / "de.hmdl");
  EXPECT_FALSE(load_cascade(dir / "de.hmdl").model_c.has_value());

  CascadeModel broken = en;
  broken.model_c.reset();
  EXPECT_THROW(broken.validate(), DataError);
  broken = en;
  broken.model_b.language = Language::kHi;
  EXPECT_THROW(broken.validate(), DataError);
  broken = de;
  broken.model_c = en.model_c;
  EXPECT_THROW(broken.validate(), DataError);

  save_model(en.model_a, dir / "a.hmdl");
  EXPECT_THROW(load_cascade(dir / "a.hmdl"), FormatError);
}

}  // namespace
}  // namespace hatemon
