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

#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <random>

#include "hatemon/errors.h"

namespace hatemon {
namespace {

constexpr Label kAllClasses[] = {Label::kHate, Label::kOffn, Label::kPrfn,
                                 Label::kNone};

TEST(Confusion, SmallCases) {
  const std::vector<Label> a = {Label::kHof, Label::kNot};
  const auto classes = training_classes(Task::kA);
  auto cm = confusion(a, a, classes);
  EXPECT_EQ(cm.counts, (std::vector<std::vector<uint64_t>>{{1, 0}, {0, 1}}));
  const std::vector<Label> hh = {Label::kHof, Label::kHof};
  const std::vector<Label> nn = {Label::kNot, Label::kNot};
  cm = confusion(hh, nn, classes);
  EXPECT_EQ(cm.counts[0][1], 2u);
  EXPECT_EQ(cm.total(), 2u);
  cm = confusion({}, {}, classes);
  EXPECT_EQ(cm.total(), 0u);
  EXPECT_EQ(cm.counts.size(), 2u);
  EXPECT_THROW(confusion(a, std::span(hh).first(1), classes), DataError);
  const std::vector<Label> odd = {Label::kHof, Label::kTin};
  EXPECT_THROW(confusion(odd, a, classes), DataError);
}

TEST(PerClassF1, SpecExamples) {
  const auto classes = training_classes(Task::kA);
  const std::vector<Label> gold = {Label::kHof, Label::kNot, Label::kHof,
                                   Label::kNot};
  const std::vector<Label> pred = {Label::kHof, Label::kHof, Label::kNot,
                                   Label::kNot};
  auto f1 = per_class_f1(confusion(gold, pred, classes));
  EXPECT_DOUBLE_EQ(f1[Label::kHof], 0.5);
  EXPECT_DOUBLE_EQ(f1[Label::kNot], 0.5);
  f1 = per_class_f1(confusion(gold, gold, classes));
  EXPECT_DOUBLE_EQ(f1[Label::kHof], 1.0);
  // TIN never occurs: 0/0 counts as zero.
  const std::vector<Label> c_classes = {Label::kTin, Label::kUnt};
  const std::vector<Label> unt = {Label::kUnt};
  f1 = per_class_f1(confusion(unt, unt, c_classes));
  EXPECT_EQ(f1[Label::kTin], 0.0);
  EXPECT_EQ(f1[Label::kUnt], 1.0);
}

// Exhaustive recount of one class's TP/FP/FN straight from the pairs.
double oracle_f1(const std::vector<Label>& gold, const std::vector<Label>& pred,
                 Label c) {
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    tp += gold[i] == c && pred[i] == c;
    fp += gold[i] != c && pred[i] == c;
    fn += gold[i] == c && pred[i] != c;
  }
  return 2 * tp + fp + fn == 0
             ? 0.0
             : static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
}

TEST(PerClassF1, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2019);
  for (int instance = 0; instance < 500; ++instance) {
    const std::size_t k = 2 + rng() % 3;
    const std::size_t n = rng() % 21;
    std::span<const Label> classes(kAllClasses, k);
    std::vector<Label> gold, pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(classes[rng() % k]);
      pred.push_back(classes[rng() % k]);
    }
    const auto f1 = per_class_f1(confusion(gold, pred, classes));
    ASSERT_EQ(f1.size(), k);
    for (Label c : classes) {
      EXPECT_NEAR(f1.at(c), oracle_f1(gold, pred, c), 1e-12);
    }
  }
}

TEST(MacroF1, PublishedTotals) {
  using M = PerClassF1;
  EXPECT_EQ(format_score(macro_f1(M{{Label::kHof, 0.59}, {Label::kNot, 0.79}},
                                  training_classes(Task::kA))),
            "0.69");
  const double de_b = macro_f1(M{{Label::kHate, 0.04},
                                 {Label::kOffn, 0.00},
                                 {Label::kPrfn, 0.19},
                                 {Label::kNone, 0.87}},
                               evaluation_classes(Task::kB));
  EXPECT_NEAR(de_b, 0.275, 1e-12);
  EXPECT_EQ(format_score(de_b), "0.28");
  const double hi_c = macro_f1(
      M{{Label::kTin, 0.63}, {Label::kUnt, 0.17}, {Label::kNone, 0.79}},
      evaluation_classes(Task::kC));
  EXPECT_EQ(format_score(hi_c), "0.53");
  EXPECT_THROW(macro_f1(M{}, {}), DataError);
  EXPECT_THROW(macro_f1(M{{Label::kHof, 1.0}}, training_classes(Task::kA)),
               DataError);
}

TEST(MacroF1, IgnoresEntriesOutsideTheClassSet) {
  const PerClassF1 f1 = {{Label::kHof, 1.0}, {Label::kNot, 0.0},
                         {Label::kTin, 0.3}};
  EXPECT_DOUBLE_EQ(macro_f1(f1, training_classes(Task::kA)), 0.5);
}

TEST(MacroF1, SupportIndependence) {
  std::mt19937_64 rng(4);
  std::vector<Label> gold, pred;
  for (int i = 0; i < 60; ++i) {
    gold.push_back(kAllClasses[rng() % 4]);
    pred.push_back(kAllClasses[rng() % 4]);
  }
  // Duplicate every HATE example.
  auto g2 = gold, p2 = pred;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == Label::kHate) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
  }
  const auto f1 = per_class_f1(confusion(g2, p2, kAllClasses));
  double mean = 0.0;
  for (Label c : kAllClasses) mean += f1.at(c);
  EXPECT_DOUBLE_EQ(macro_f1(f1, kAllClasses), mean / 4.0);
}

TEST(FormatScore, RoundsDecimalTiesToEven) {
  EXPECT_EQ(format_score(0.615), "0.62");
  EXPECT_EQ(format_score((0.36 + 0.87) / 2), "0.62");
  EXPECT_EQ(format_score(0.275), "0.28");
  EXPECT_EQ(format_score((0.28 + 0.00 + 0.31 + 0.79) / 4), "0.34");
  EXPECT_EQ(format_score(0.775), "0.78");
  EXPECT_EQ(format_score(0.6149), "0.61");
  EXPECT_EQ(format_score(0.6151), "0.62");
  EXPECT_EQ(format_score(0.0), "0.00");
  EXPECT_EQ(format_score(1.0), "1.00");
  EXPECT_EQ(format_score(0.005), "0.00");
  EXPECT_EQ(format_score(0.015), "0.02");
}

LabelSet ls(Label a, Label b = Label::kNone, Label c = Label::kNone) {
  return {a, b, c};
}

TEST(EvaluateCascade, IdentityAndShape) {
  const std::vector<LabelSet> gold = {
      ls(Label::kHof, Label::kHate, Label::kTin),
      ls(Label::kNot), ls(Label::kHof, Label::kPrfn, Label::kUnt),
      ls(Label::kHof, Label::kOffn, Label::kTin)};
  const auto reports = evaluate_cascade(gold, gold, Language::kEn);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_EQ(reports[1].per_class_f1.size(), 4u);
  EXPECT_EQ(reports[1].support.at(Label::kNone), 1u);
  EXPECT_EQ(reports[2].per_class_f1.size(), 3u);

  std::vector<LabelSet> de = {ls(Label::kHof, Label::kHate), ls(Label::kNot)};
  EXPECT_EQ(evaluate_cascade(de, de, Language::kDe).size(), 2u);
  EXPECT_THROW(evaluate_cascade(de, std::span(de).first(1), Language::kDe),
               DataError);
}

TEST(EvaluateCascade, NoneMatchesNotWhenGateIsExact) {
  // The A decision is correct everywhere; B makes mistakes among HOF rows.
  std::mt19937_64 rng(8);
  std::vector<LabelSet> gold, pred;
  for (int i = 0; i < 200; ++i) {
    if (rng() % 3 == 0) {
      gold.push_back(ls(Label::kNot));
      pred.push_back(ls(Label::kNot));
    } else {
      const Label b[] = {Label::kHate, Label::kOffn, Label::kPrfn};
      gold.push_back(ls(Label::kHof, b[rng() % 3], Label::kTin));
      pred.push_back(ls(Label::kHof, b[rng() % 3], Label::kUnt));
    }
  }
  // Also flip some A decisions both ways: NONE still mirrors NOT.
  pred[0] = gold[0].task_a == Label::kNot
                ? ls(Label::kHof, Label::kHate, Label::kTin)
                : ls(Label::kNot);
  const auto r = evaluate_cascade(gold, pred, Language::kEn);
  EXPECT_EQ(r[1].per_class_f1.at(Label::kNone), r[0].per_class_f1.at(Label::kNot));
  EXPECT_EQ(r[2].per_class_f1.at(Label::kNone), r[0].per_class_f1.at(Label::kNot));
}

TEST(EvaluateCascade, PermutationInvariant) {
  std::mt19937_64 rng(1);
  std::vector<LabelSet> gold, pred;
  const Label b[] = {Label::kHate, Label::kOffn, Label::kPrfn};
  for (int i = 0; i < 80; ++i) {
    for (auto* v : {&gold, &pred}) {
      v->push_back(rng() % 2 ? ls(Label::kNot)
                             : ls(Label::kHof, b[rng() % 3], Label::kTin));
    }
  }
  const auto before = evaluate_cascade(gold, pred, Language::kHi);
  std::vector<std::size_t> order(gold.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<LabelSet> g2, p2;
  for (auto i : order) {
    g2.push_back(gold[i]);
    p2.push_back(pred[i]);
  }
  const auto after = evaluate_cascade(g2, p2, Language::kHi);
  for (std::size_t t = 0; t < before.size(); ++t) {
    EXPECT_EQ(before[t].per_class_f1, after[t].per_class_f1);
    EXPECT_EQ(before[t].macro_f1, after[t].macro_f1);
  }
}

TEST(EvaluateCascade, DisjointLabelUsageGivesZero) {
  std::vector<LabelSet> gold(5, ls(Label::kNot));
  std::vector<LabelSet> pred(5, ls(Label::kHof, Label::kHate, Label::kTin));
  for (const auto& r : evaluate_cascade(gold, pred, Language::kEn)) {
    EXPECT_EQ(r.macro_f1, 0.0);
  }
}

TEST(RenderReport, TextAndJson) {
  EvaluationReport r;
  r.language = Language::kEn;
  r.task = Task::kA;
  r.per_class_f1 = {{Label::kHof, 0.59}, {Label::kNot, 0.79}};
  r.macro_f1 = macro_f1(r.per_class_f1, training_classes(Task::kA));
  r.support = {{Label::kHof, 288}, {Label::kNot, 865}};
  EXPECT_EQ(render_report({r}, ReportFormat::kTextTable),
            "Sub-task A (EN)\nHOF 0.59\nNOT 0.79\nTotal 0.69\n");
  EXPECT_EQ(render_report({}, ReportFormat::kTextTable), "");

  EvaluationReport de = r;
  de.language = Language::kDe;
  de.per_class_f1 = {{Label::kHof, 0.36}, {Label::kNot, 0.87}};
  de.macro_f1 = 0.615;
  const std::string text = render_report({r, de}, ReportFormat::kTextTable);
  EXPECT_NE(text.find("\n\nSub-task A (DE)\n"), std::string::npos);
  EXPECT_NE(text.find("Total 0.62"), std::string::npos);

  ReportContext ctx{"hatemon 1.0.0", {{"en.hmdl", "deadbeef"}}};
  const std::string js = render_report({de}, ReportFormat::kJson, ctx);
  const auto doc = nlohmann::json::parse(js);
  EXPECT_EQ(doc[0]["macro_f1"].get<double>(), 0.615);
  EXPECT_EQ(doc[0]["model_checksums"]["en.hmdl"], "deadbeef");
  const auto back = parse_json_reports(js);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].macro_f1, 0.615);
  EXPECT_EQ(back[0].per_class_f1, de.per_class_f1);
  EXPECT_EQ(back[0].support, de.support);
  EXPECT_THROW(parse_json_reports("{"), DataError);
}

}  // namespace
}  // namespace hatemon
