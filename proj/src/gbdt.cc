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

#include "hatemon/gbdt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hatemon/digest.h"
#include "hatemon/errors.h"

namespace hatemon {

namespace {

constexpr uint32_t kBlobVersion = 1;

// Column-major quantized copy of the training matrix.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<uint8_t> bins;                    // bins[col * rows + row]
  std::vector<std::vector<double>> thresholds;  // per column, ascending

  uint8_t at(std::size_t col, std::size_t row) const {
    return bins[col * rows + row];
  }
  int num_bins(std::size_t col) const {
    return static_cast<int>(thresholds[col].size()) + 1;
  }
};

// Thresholds sit halfway between consecutive distinct values, so "x <= t"
// and "bin(x) <= index of t" agree on every training value.
std::vector<double> column_thresholds(std::vector<float> values, int max_bin) {
  std::sort(values.begin(), values.end());
  std::vector<float> distinct;
  std::vector<std::size_t> counts;
  for (float v : values) {
    if (distinct.empty() || distinct.back() != v) {
      distinct.push_back(v);
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }
  std::vector<double> out;
  if (distinct.size() <= 1) return out;
  auto midpoint = [&](std::size_t j) {
    return (static_cast<double>(distinct[j]) + distinct[j + 1]) / 2.0;
  };
  if (distinct.size() <= static_cast<std::size_t>(max_bin)) {
    for (std::size_t j = 0; j + 1 < distinct.size(); ++j) {
      out.push_back(midpoint(j));
    }
    return out;
  }
  // Equal-frequency boundaries.
  const double step =
      static_cast<double>(values.size()) / static_cast<double>(max_bin);
  double next = step;
  std::size_t cumulative = 0;
  for (std::size_t j = 0; j + 1 < distinct.size(); ++j) {
    cumulative += counts[j];
    if (static_cast<double>(cumulative) >= next) {
      out.push_back(midpoint(j));
      if (out.size() + 1 >= static_cast<std::size_t>(max_bin)) break;
      next = static_cast<double>(cumulative) + step;
    }
  }
  return out;
}

BinnedMatrix bin_rows(std::span<const FeatureRow> rows, int max_bin) {
  BinnedMatrix m;
  m.rows = rows.size();
  m.cols = rows.front().size();
  m.bins.resize(m.rows * m.cols);
  m.thresholds.resize(m.cols);
  std::vector<float> column(m.rows);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t r = 0; r < m.rows; ++r) column[r] = rows[r][c];
    m.thresholds[c] = column_thresholds(column, max_bin);
    const auto& th = m.thresholds[c];
    for (std::size_t r = 0; r < m.rows; ++r) {
      const auto pos = std::lower_bound(th.begin(), th.end(),
                                        static_cast<double>(column[r]));
      m.bins[c * m.rows + r] = static_cast<uint8_t>(pos - th.begin());
    }
  }
  return m;
}

struct SplitCandidate {
  int feature = -1;
  int bin = 0;
  double gain = 0.0;
  double left_grad = 0.0;
  double left_hess = 0.0;
};

struct GrowingLeaf {
  std::vector<uint32_t> rows;
  double sum_grad = 0.0;
  double sum_hess = 0.0;
  SplitCandidate best;
  // Where this leaf hangs in the tree: parent node and side, -1 for root.
  int parent = -1;
  bool is_left = false;
};

class TreeLearner {
 public:
  TreeLearner(const BinnedMatrix& data, const BoosterConfig& config)
      : data_(data), config_(config) {}

  // Grows one tree on `rows` using only `features`. Returns the tree with
  // thresholds mapped back to raw values; `node_bins` receives the bin index
  // of each node's split for fast traversal of binned rows.
  GradientBoostedTrees::Tree grow(std::vector<uint32_t> rows,
                                  const std::vector<uint32_t>& features,
                                  std::span<const double> grad,
                                  std::span<const double> hess,
                                  std::vector<int>& node_bins) const {
    GradientBoostedTrees::Tree tree;
    node_bins.clear();
    std::vector<GrowingLeaf> leaves(1);
    leaves[0].rows = std::move(rows);
    for (uint32_t r : leaves[0].rows) {
      leaves[0].sum_grad += grad[r];
      leaves[0].sum_hess += hess[r];
    }
    find_best_split(leaves[0], features, grad, hess);

    while (static_cast<int>(leaves.size()) < config_.num_leaves) {
      int chosen = -1;
      double best_gain = 0.0;
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        const auto& cand = leaves[i].best;
        if (cand.feature >= 0 && cand.gain > best_gain) {
          best_gain = cand.gain;
          chosen = static_cast<int>(i);
        }
      }
      if (chosen < 0) break;

      GrowingLeaf& leaf = leaves[static_cast<std::size_t>(chosen)];
      const SplitCandidate split = leaf.best;
      const auto node_index = static_cast<int32_t>(tree.nodes.size());
      GradientBoostedTrees::Node node;
      node.feature = split.feature;
      node.threshold = data_.thresholds[static_cast<std::size_t>(
          split.feature)][static_cast<std::size_t>(split.bin)];
      tree.nodes.push_back(node);
      node_bins.push_back(split.bin);
      if (leaf.parent >= 0) {
        auto& parent = tree.nodes[static_cast<std::size_t>(leaf.parent)];
        (leaf.is_left ? parent.left : parent.right) = node_index;
      }

      GrowingLeaf right;
      std::vector<uint32_t> left_rows;
      left_rows.reserve(leaf.rows.size());
      for (uint32_t r : leaf.rows) {
        if (data_.at(static_cast<std::size_t>(split.feature), r) <= split.bin) {
          left_rows.push_back(r);
        } else {
          right.rows.push_back(r);
        }
      }
      right.sum_grad = leaf.sum_grad - split.left_grad;
      right.sum_hess = leaf.sum_hess - split.left_hess;
      right.parent = node_index;
      right.is_left = false;

      leaf.rows = std::move(left_rows);
      leaf.sum_grad = split.left_grad;
      leaf.sum_hess = split.left_hess;
      leaf.parent = node_index;
      leaf.is_left = true;

      find_best_split(leaf, features, grad, hess);
      find_best_split(right, features, grad, hess);
      leaves.push_back(std::move(right));
    }

    tree.leaves.resize(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto& leaf = leaves[i];
      tree.leaves[i] = -leaf.sum_grad / (leaf.sum_hess + config_.lambda_l2) *
                       config_.learning_rate;
      if (leaf.parent >= 0) {
        auto& parent = tree.nodes[static_cast<std::size_t>(leaf.parent)];
        (leaf.is_left ? parent.left : parent.right) =
            ~static_cast<int32_t>(i);
      }
    }
    return tree;
  }

 private:
  double leaf_score(double g, double h) const {
    return g * g / (h + config_.lambda_l2);
  }

  void find_best_split(GrowingLeaf& leaf,
                       const std::vector<uint32_t>& features,
                       std::span<const double> grad,
                       std::span<const double> hess) const {
    leaf.best = SplitCandidate{};
    const auto min_count = static_cast<std::size_t>(config_.min_data_in_leaf);
    if (leaf.rows.size() < 2 * min_count) return;
    const double parent_score = leaf_score(leaf.sum_grad, leaf.sum_hess);
    double best_gain = std::max(config_.min_gain_to_split, 0.0);

    std::vector<double> hist_grad(256);
    std::vector<double> hist_hess(256);
    std::vector<uint32_t> hist_count(256);
    for (uint32_t f : features) {
      const int bins = data_.num_bins(f);
      if (bins < 2) continue;
      std::fill_n(hist_grad.begin(), bins, 0.0);
      std::fill_n(hist_hess.begin(), bins, 0.0);
      std::fill_n(hist_count.begin(), bins, 0u);
      const uint8_t* column = data_.bins.data() + std::size_t{f} * data_.rows;
      for (uint32_t r : leaf.rows) {
        const uint8_t b = column[r];
        hist_grad[b] += grad[r];
        hist_hess[b] += hess[r];
        ++hist_count[b];
      }
      double left_grad = 0.0;
      double left_hess = 0.0;
      std::size_t left_count = 0;
      for (int b = 0; b + 1 < bins; ++b) {
        left_grad += hist_grad[b];
        left_hess += hist_hess[b];
        left_count += hist_count[b];
        const std::size_t right_count = leaf.rows.size() - left_count;
        if (left_count < min_count) continue;
        if (right_count < min_count) break;
        const double right_hess = leaf.sum_hess - left_hess;
        if (left_hess < config_.min_sum_hessian_in_leaf ||
            right_hess < config_.min_sum_hessian_in_leaf) {
          continue;
        }
        const double gain = leaf_score(left_grad, left_hess) +
                            leaf_score(leaf.sum_grad - left_grad, right_hess) -
                            parent_score;
        if (gain > best_gain) {
          best_gain = gain;
          leaf.best = {static_cast<int>(f), b, gain, left_grad, left_hess};
        }
      }
    }
  }

  const BinnedMatrix& data_;
  const BoosterConfig& config_;
};

double binned_tree_output(const GradientBoostedTrees::Tree& tree,
                          const std::vector<int>& node_bins,
                          const BinnedMatrix& data, std::size_t row) {
  if (tree.nodes.empty()) return tree.leaves[0];
  int32_t at = 0;
  while (at >= 0) {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    at = data.at(static_cast<std::size_t>(node.feature), row) <=
                 node_bins[static_cast<std::size_t>(at)]
             ? node.left
             : node.right;
  }
  return tree.leaves[static_cast<std::size_t>(~at)];
}

double tree_output(const GradientBoostedTrees::Tree& tree,
                   std::span<const float> row) {
  if (tree.nodes.empty()) return tree.leaves[0];
  int32_t at = 0;
  while (at >= 0) {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    at = static_cast<double>(row[static_cast<std::size_t>(node.feature)]) <=
                 node.threshold
             ? node.left
             : node.right;
  }
  return tree.leaves[static_cast<std::size_t>(~at)];
}

void softmax_in_place(std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

// Deterministic sample of `k` indices out of [0, n), returned ascending.
std::vector<uint32_t> sample_indices(std::size_t n, std::size_t k,
                                     uint64_t& state) {
  std::vector<uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + splitmix64(state) % (n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

// Bounds-checked little-endian reader for deserialize().
class BlobReader {
 public:
  explicit BlobReader(std::string_view blob) : blob_(blob) {}

  template <typename T>
  T read() {
    if (blob_.size() - pos_ < sizeof(T)) {
      throw FormatError("ensemble payload is truncated");
    }
    T value = get_le<T>(blob_.data() + pos_);
    pos_ += sizeof(T);
    return value;
  }

  bool done() const { return pos_ == blob_.size(); }

 private:
  std::string_view blob_;
  std::size_t pos_ = 0;
};

}  // namespace

void BoosterConfig::validate() const {
  if (num_rounds < 1) throw ConfigError("num_rounds must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (num_leaves < 2) throw ConfigError("num_leaves must be >= 2");
  if (min_data_in_leaf < 1) throw ConfigError("min_data_in_leaf must be >= 1");
  if (min_sum_hessian_in_leaf < 0.0) {
    throw ConfigError("min_sum_hessian_in_leaf must be >= 0");
  }
  if (lambda_l2 < 0.0) throw ConfigError("lambda_l2 must be >= 0");
  if (max_bin < 2 || max_bin > 256) {
    throw ConfigError("max_bin must be in [2, 256]");
  }
  if (!(bagging_fraction > 0.0 && bagging_fraction <= 1.0)) {
    throw ConfigError("bagging_fraction must be in (0, 1]");
  }
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0)) {
    throw ConfigError("feature_fraction must be in (0, 1]");
  }
}

GradientBoostedTrees GradientBoostedTrees::fit(std::span<const FeatureRow> rows,
                                               std::span<const int> labels,
                                               int num_classes,
                                               const BoosterConfig& config,
                                               uint64_t seed) {
  config.validate();
  if (rows.size() < 2) throw DataError("need at least two training rows");
  if (rows.size() != labels.size()) {
    throw DataError("feature and label counts differ");
  }
  if (rows.size() > std::numeric_limits<uint32_t>::max()) {
    throw DataError("too many training rows");
  }
  if (num_classes < 2) throw DataError("need at least two classes");
  const std::size_t width = rows.front().size();
  if (width == 0) throw DataError("feature rows are empty");
  for (const auto& row : rows) {
    if (row.size() != width) {
      throw DataError("feature dimension mismatch: " +
                      std::to_string(row.size()) + " vs " +
                      std::to_string(width));
    }
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw DataError("label index out of range");
  }

  const std::size_t n = rows.size();
  const auto k = static_cast<std::size_t>(num_classes);
  GradientBoostedTrees model;
  model.num_classes_ = num_classes;
  model.num_features_ = width;
  model.tree_groups_ = num_classes == 2 ? 1 : num_classes;
  const auto groups = static_cast<std::size_t>(model.tree_groups_);

  std::vector<std::size_t> class_counts(k, 0);
  for (int y : labels) ++class_counts[static_cast<std::size_t>(y)];
  auto prior = [&](std::size_t c) {
    const double p = static_cast<double>(class_counts[c]) / n;
    return std::clamp(p, 1e-6, 1.0 - 1e-6);
  };
  if (groups == 1) {
    const double p = prior(1);
    model.init_scores_ = {std::log(p / (1.0 - p))};
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      model.init_scores_.push_back(std::log(prior(c)));
    }
  }

  const BinnedMatrix data = bin_rows(rows, config.max_bin);
  const TreeLearner learner(data, config);

  std::vector<double> scores(n * groups);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < groups; ++g) {
      scores[i * groups + g] = model.init_scores_[g];
    }
  }

  uint64_t rng = seed ^ 0xA5A5A5A5DEADBEEFULL;
  const auto bag_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.bagging_fraction * n)));
  const auto feature_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.feature_fraction * width)));

  std::vector<double> grad(n * groups);
  std::vector<double> hess(n * groups);
  std::vector<double> group_grad(n);
  std::vector<double> group_hess(n);
  std::vector<double> probs(k);
  const double multiclass_factor =
      groups > 1 ? static_cast<double>(k) / static_cast<double>(k - 1) : 1.0;
  std::vector<int> node_bins;

  for (int round = 0; round < config.num_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = static_cast<std::size_t>(labels[i]);
      if (groups == 1) {
        const double p = sigmoid(scores[i]);
        grad[i] = p - (y == 1 ? 1.0 : 0.0);
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      } else {
        for (std::size_t c = 0; c < k; ++c) probs[c] = scores[i * groups + c];
        softmax_in_place(probs);
        for (std::size_t c = 0; c < k; ++c) {
          grad[i * groups + c] = probs[c] - (y == c ? 1.0 : 0.0);
          hess[i * groups + c] = std::max(
              multiclass_factor * probs[c] * (1.0 - probs[c]), 1e-16);
        }
      }
    }

    std::vector<uint32_t> bag;
    if (bag_size < n) {
      bag = sample_indices(n, bag_size, rng);
    } else {
      bag.resize(n);
      std::iota(bag.begin(), bag.end(), 0u);
    }

    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<uint32_t> features;
      if (feature_count < width) {
        features = sample_indices(width, feature_count, rng);
      } else {
        features.resize(width);
        std::iota(features.begin(), features.end(), 0u);
      }
      for (std::size_t i = 0; i < n; ++i) {
        group_grad[i] = grad[i * groups + g];
        group_hess[i] = hess[i * groups + g];
      }
      Tree tree = learner.grow(bag, features, group_grad, group_hess,
                               node_bins);
      for (std::size_t i = 0; i < n; ++i) {
        scores[i * groups + g] += binned_tree_output(tree, node_bins, data, i);
      }
      model.trees_.push_back(std::move(tree));
    }
  }
  return model;
}

std::vector<double> GradientBoostedTrees::raw_scores(
    std::span<const float> row) const {
  if (row.size() != num_features_) {
    throw DataError("feature dimension mismatch: model expects " +
                    std::to_string(num_features_) + ", got " +
                    std::to_string(row.size()));
  }
  std::vector<double> scores = init_scores_;
  const auto groups = static_cast<std::size_t>(tree_groups_);
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    scores[t % groups] += tree_output(trees_[t], row);
  }
  return scores;
}

std::vector<double> GradientBoostedTrees::predict_proba(
    std::span<const float> row) const {
  if (num_classes_ == 0) throw DataError("model is not trained");
  std::vector<double> scores = raw_scores(row);
  if (tree_groups_ == 1) {
    const double p = sigmoid(scores[0]);
    return {1.0 - p, p};
  }
  softmax_in_place(scores);
  return scores;
}

std::string GradientBoostedTrees::serialize() const {
  std::string out;
  put_le<uint32_t>(out, kBlobVersion);
  put_le<uint32_t>(out, static_cast<uint32_t>(num_classes_));
  put_le<uint64_t>(out, num_features_);
  put_le<uint32_t>(out, static_cast<uint32_t>(tree_groups_));
  put_le<uint32_t>(out, static_cast<uint32_t>(init_scores_.size()));
  for (double s : init_scores_) put_le<double>(out, s);
  put_le<uint32_t>(out, static_cast<uint32_t>(trees_.size()));
  for (const Tree& tree : trees_) {
    put_le<uint32_t>(out, static_cast<uint32_t>(tree.nodes.size()));
    for (const Node& node : tree.nodes) {
      put_le<int32_t>(out, node.feature);
      put_le<double>(out, node.threshold);
      put_le<int32_t>(out, node.left);
      put_le<int32_t>(out, node.right);
    }
    put_le<uint32_t>(out, static_cast<uint32_t>(tree.leaves.size()));
    for (double v : tree.leaves) put_le<double>(out, v);
  }
  return out;
}

GradientBoostedTrees GradientBoostedTrees::deserialize(std::string_view blob) {
  BlobReader in(blob);
  if (in.read<uint32_t>() != kBlobVersion) {
    throw FormatError("unsupported ensemble encoding");
  }
  GradientBoostedTrees model;
  model.num_classes_ = static_cast<int>(in.read<uint32_t>());
  model.num_features_ = in.read<uint64_t>();
  model.tree_groups_ = static_cast<int>(in.read<uint32_t>());
  if (model.num_classes_ < 2 || model.num_features_ == 0 ||
      model.tree_groups_ !=
          (model.num_classes_ == 2 ? 1 : model.num_classes_)) {
    throw FormatError("inconsistent ensemble header");
  }
  const uint32_t num_init = in.read<uint32_t>();
  if (num_init != static_cast<uint32_t>(model.tree_groups_)) {
    throw FormatError("inconsistent ensemble header");
  }
  for (uint32_t i = 0; i < num_init; ++i) {
    model.init_scores_.push_back(in.read<double>());
  }
  const uint32_t num_trees = in.read<uint32_t>();
  if (num_trees % static_cast<uint32_t>(model.tree_groups_) != 0) {
    throw FormatError("tree count is not a whole number of rounds");
  }
  for (uint32_t t = 0; t < num_trees; ++t) {
    Tree tree;
    const uint32_t num_nodes = in.read<uint32_t>();
    if (num_nodes > blob.size()) throw FormatError("ensemble is truncated");
    tree.nodes.resize(num_nodes);
    for (Node& node : tree.nodes) {
      node.feature = in.read<int32_t>();
      node.threshold = in.read<double>();
      node.left = in.read<int32_t>();
      node.right = in.read<int32_t>();
    }
    const uint32_t num_leaves = in.read<uint32_t>();
    if (num_leaves != num_nodes + 1) throw FormatError("malformed tree");
    tree.leaves.resize(num_leaves);
    for (double& v : tree.leaves) v = in.read<double>();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const Node& node = tree.nodes[i];
      if (node.feature < 0 ||
          static_cast<std::size_t>(node.feature) >= model.num_features_) {
        throw FormatError("tree splits on an unknown feature");
      }
      for (int32_t child : {node.left, node.right}) {
        // Children always come after their parent, which rules out cycles.
        const bool ok = child >= 0
                            ? static_cast<std::size_t>(child) > i &&
                                  static_cast<std::size_t>(child) < num_nodes
                            : static_cast<uint32_t>(~child) < num_leaves;
        if (!ok) throw FormatError("tree has a dangling child");
      }
    }
    model.trees_.push_back(std::move(tree));
  }
  if (!in.done()) throw FormatError("trailing bytes after ensemble");
  return model;
}

}  // namespace hatemon
