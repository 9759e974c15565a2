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

#include "hatemon/cli.h"

#include <CLI11.hpp>
#include <optional>

#include "hatemon/errors.h"
#include "hatemon/feature_cache.h"
#include "hatemon/file_util.h"

namespace hatemon {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

void require(const std::filesystem::path& path, const char* key) {
  if (path.empty()) throw ConfigError(std::string("config.") + key +
                                      " is not set");
}

// Providers, optional cache and the extractor, built in that order so that
// dimension errors surface before any file is touched.
class FeatureStack {
 public:
  explicit FeatureStack(const PipelineConfig& config) {
    auto [transformer, sentence] = make_providers(config);
    if (!config.cache_path.empty()) cache_.emplace(config.cache_path);
    extractor_.emplace(std::move(transformer), std::move(sentence),
                       cache_ ? &*cache_ : nullptr);
  }

  const FeatureExtractor& extractor() const { return *extractor_; }
  const FeatureCache* cache() const { return cache_ ? &*cache_ : nullptr; }

 private:
  std::optional<FeatureCache> cache_;
  std::optional<FeatureExtractor> extractor_;
};

void print_cache_counters(const FeatureStack& stack, std::ostream& out) {
  if (const FeatureCache* cache = stack.cache()) {
    const auto c = cache->counters();
    out << "feature cache: " << c.hits << " hits, " << c.misses
        << " misses, " << c.corrupt << " corrupt entries recomputed\n";
  }
}

}  // namespace

int cmd_stats(const PipelineConfig& config, std::ostream& out) {
  require(config.train_path, "train_path");
  std::vector<std::pair<std::string, DatasetStats>> columns;
  columns.emplace_back(
      "Train", compute_stats(load_dataset(config.train_path, config.language,
                                          Split::kTrain)));
  if (!config.test_path.empty()) {
    columns.emplace_back(
        "Test", compute_stats(load_dataset(config.test_path, config.language,
                                           Split::kTest)));
  }
  out << render_stats_table(config.language, columns);
  return 0;
}

int cmd_featurize(const PipelineConfig& config, std::ostream& out) {
  require(config.cache_path, "cache_path");
  FeatureStack stack(config);
  std::size_t total = 0;
  for (const auto& [path, split] :
       {std::pair{config.train_path, Split::kTrain},
        std::pair{config.test_path, Split::kTest}}) {
    if (path.empty()) continue;
    const Dataset ds = load_dataset(path, config.language, split);
    total += featurize(ds, stack.extractor(), config.preprocess,
                       config.threads)
                 .size();
  }
  out << "featurized " << total << " posts\n";
  print_cache_counters(stack, out);
  return 0;
}

int cmd_train(const PipelineConfig& config, std::ostream& out) {
  require(config.train_path, "train_path");
  require(config.model_path, "model_path");
  FeatureStack stack(config);
  const Dataset train =
      load_dataset(config.train_path, config.language, Split::kTrain);
  if (!train.labeled()) {
    throw DataError(config.train_path.string() + " has no label columns");
  }
  const auto features =
      featurize(train, stack.extractor(), config.preprocess, config.threads);
  const CascadeModel cascade =
      train_cascade(train, features, config.training, config.seed, &out);
  save_model(cascade, config.model_path);
  print_cache_counters(stack, out);
  out << "model written to " << config.model_path.string() << '\n';
  return 0;
}

int cmd_predict(const PipelineConfig& config,
                const std::filesystem::path& input,
                const std::filesystem::path& output, std::ostream& out) {
  require(config.model_path, "model_path");
  const CascadeModel cascade = load_cascade(config.model_path);
  if (cascade.language != config.language) {
    throw ConfigError("model language " +
                      std::string(to_string(cascade.language)) +
                      " differs from config language " +
                      std::string(to_string(config.language)));
  }
  FeatureStack stack(config);
  const Dataset ds = load_dataset(input, config.language, Split::kTest);
  const auto features =
      featurize(ds, stack.extractor(), config.preprocess, config.threads);
  const auto labels = predict_cascade(cascade, features);
  std::vector<PredictionRow> rows;
  rows.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    rows.push_back({ds.rows()[i].post.id, labels[i]});
  }
  write_file_atomically(output, render_predictions(rows, config.language));
  out << "wrote " << rows.size() << " predictions to " << output.string()
      << '\n';
  return 0;
}

int cmd_evaluate(const PipelineConfig& config,
                 const std::filesystem::path& gold_path,
                 const std::filesystem::path& pred_path,
                 const std::filesystem::path& report_dir, std::ostream& out) {
  const Dataset gold = load_dataset(gold_path, config.language, Split::kTest);
  if (!gold.labeled()) {
    throw DataError(gold_path.string() + " has no label columns");
  }
  const auto pred = read_predictions(pred_path, config.language);
  const auto aligned = align_predictions(gold, pred);
  std::vector<LabelSet> gold_labels;
  gold_labels.reserve(gold.size());
  for (const Row& row : gold.rows()) gold_labels.push_back(*row.labels);
  const auto reports = evaluate_cascade(gold_labels, aligned, config.language);

  ReportContext context;
  context.pipeline_version = kPipelineVersion;
  if (!config.model_path.empty() && std::filesystem::exists(config.model_path)) {
    context.model_checksums[config.model_path.filename().string()] =
        model_checksum(config.model_path);
  }
  std::filesystem::path dir = report_dir;
  if (dir.empty()) dir = config.report_dir;
  if (dir.empty()) dir = pred_path.parent_path();
  const std::string stem = "report_" + lower(to_string(config.language));
  const std::string text =
      render_report(reports, ReportFormat::kTextTable, context);
  write_file_atomically(dir / (stem + ".txt"), text);
  write_file_atomically(dir / (stem + ".json"),
                        render_report(reports, ReportFormat::kJson, context));
  out << text;
  return 0;
}

int cmd_report(const std::vector<std::filesystem::path>& report_files,
               std::ostream& out) {
  std::vector<EvaluationReport> all;
  for (const auto& path : report_files) {
    auto reports = parse_json_reports(read_file(path));
    all.insert(all.end(), reports.begin(), reports.end());
  }
  out << render_report(all, ReportFormat::kTextTable);
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Multilingual abusive-text classification pipeline", "hatemon"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input;
  std::string output;
  std::string report_dir;
  std::vector<std::string> report_files;

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "pipeline config (JSON)")
        ->required();
    return sub;
  };
  auto* stats = with_config(
      app.add_subcommand("stats", "class counts of the train/test files"));
  auto* featurize_cmd = with_config(app.add_subcommand(
      "featurize", "embed train/test posts into the feature cache"));
  auto* train = with_config(
      app.add_subcommand("train", "train the A/B/C cascade and save it"));
  auto* predict = with_config(
      app.add_subcommand("predict", "write cascade predictions as TSV"));
  predict->add_option("input", input, "posts to classify (TSV)")->required();
  predict->add_option("output", output, "prediction file to write")
      ->required();
  auto* evaluate = with_config(
      app.add_subcommand("evaluate", "score predictions against gold labels"));
  evaluate->add_option("gold", input, "gold TSV")->required();
  evaluate->add_option("pred", output, "prediction TSV")->required();
  evaluate->add_option("report_dir", report_dir,
                       "directory for report files (default: config "
                       "report_dir, else next to the predictions)");
  auto* report = app.add_subcommand(
      "report", "render saved JSON reports as text tables");
  report->add_option("reports", report_files, "JSON report files")
      ->required();

  std::vector<const char*> argv{"hatemon"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    if (report->parsed()) {
      std::vector<std::filesystem::path> paths(report_files.begin(),
                                               report_files.end());
      return cmd_report(paths, out);
    }
    const PipelineConfig config = load_config(config_path);
    if (stats->parsed()) return cmd_stats(config, out);
    if (featurize_cmd->parsed()) return cmd_featurize(config, out);
    if (train->parsed()) return cmd_train(config, out);
    if (predict->parsed()) return cmd_predict(config, input, output, out);
    if (evaluate->parsed()) {
      return cmd_evaluate(config, input, output, report_dir, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kIo);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
  return static_cast<int>(ExitCode::kUsage);
}

}  // namespace hatemon
