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

#ifndef HATEMON_CLI_H_
#define HATEMON_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "hatemon/pipeline.h"

namespace hatemon {

// Subcommands. Each returns a process exit code and throws hatemon::Error on
// failure; run_cli() does the translation.
int cmd_stats(const PipelineConfig& config, std::ostream& out);
int cmd_featurize(const PipelineConfig& config, std::ostream& out);
int cmd_train(const PipelineConfig& config, std::ostream& out);
int cmd_predict(const PipelineConfig& config,
                const std::filesystem::path& input,
                const std::filesystem::path& output, std::ostream& out);
int cmd_evaluate(const PipelineConfig& config,
                 const std::filesystem::path& gold,
                 const std::filesystem::path& pred,
                 const std::filesystem::path& report_dir, std::ostream& out);
int cmd_report(const std::vector<std::filesystem::path>& report_files,
               std::ostream& out);

// `args` excludes the program name. Errors go to `err` as one line.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hatemon

#endif  // HATEMON_CLI_H_
