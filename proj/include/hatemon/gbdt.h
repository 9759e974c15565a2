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

// Gradient-boosted decision trees for dense float features.
//
// Histogram-based learner with leaf-wise (best-first) growth in the style of
// LightGBM. Features are quantized into at most `max_bin` bins per column;
// each round grows one tree (binary logistic loss) or one tree per class
// (softmax cross-entropy) by repeatedly splitting the leaf with the largest
// gain until `num_leaves` is reached or no admissible split remains.
//
// Training is deterministic: for the same data, config and seed the learned
// ensemble is bit-identical, and so are its predictions.

#ifndef HATEMON_GBDT_H_
#define HATEMON_GBDT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hatemon {

struct BoosterConfig {
  int num_rounds = 100;
  double learning_rate = 0.1;
  int num_leaves = 31;
  int min_data_in_leaf = 20;
  double min_sum_hessian_in_leaf = 1e-3;
  double lambda_l2 = 0.0;
  double min_gain_to_split = 0.0;
  int max_bin = 255;
  // Row and column subsampling per tree; 1.0 disables them.
  double bagging_fraction = 1.0;
  double feature_fraction = 1.0;

  // Throws ConfigError when a value is out of range.
  void validate() const;

  friend bool operator==(const BoosterConfig&, const BoosterConfig&) = default;
};

using FeatureRow = std::vector<float>;

class GradientBoostedTrees {
 public:
  struct Node {
    int32_t feature = 0;
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int32_t left = 0;        // >= 0: node index, < 0: ~leaf index
    int32_t right = 0;
  };

  struct Tree {
    std::vector<Node> nodes;     // empty for a single-leaf tree
    std::vector<double> leaves;  // already scaled by the learning rate
  };

  GradientBoostedTrees() = default;

  // `labels[i]` is a class index in [0, num_classes). Requires at least two
  // rows, num_classes >= 2, equal row widths and rows.size() == labels.size().
  // Throws DataError on violated preconditions.
  static GradientBoostedTrees fit(std::span<const FeatureRow> rows,
                                  std::span<const int> labels, int num_classes,
                                  const BoosterConfig& config, uint64_t seed);

  // Class probabilities, summing to one. Throws DataError on width mismatch.
  std::vector<double> predict_proba(std::span<const float> row) const;

  int num_classes() const { return num_classes_; }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_trees() const { return trees_.size(); }

  // Portable little-endian encoding; doubles are stored bit-exactly.
  std::string serialize() const;
  static GradientBoostedTrees deserialize(std::string_view blob);

 private:
  std::vector<double> raw_scores(std::span<const float> row) const;

  int num_classes_ = 0;
  std::size_t num_features_ = 0;
  // Trees per round: 1 for binary, num_classes otherwise.
  int tree_groups_ = 0;
  std::vector<double> init_scores_;
  // Round-major: trees_[round * tree_groups_ + group].
  std::vector<Tree> trees_;
};

}  // namespace hatemon

#endif  // HATEMON_GBDT_H_
