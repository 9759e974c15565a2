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

#include "hatemon/embed.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "hatemon/digest.h"
#include "hatemon/errors.h"
#include "hatemon/feature_cache.h"

namespace hatemon {

namespace {

// Adds a pseudo-random direction in [-1, 1)^dim keyed by (seed, key).
void add_direction(std::vector<double>& acc, uint64_t seed,
                   std::string_view key) {
  std::string material;
  put_le<uint64_t>(material, seed);
  material.append(key);
  const Digest256 digest = sha256(material);
  uint64_t state = get_le<uint64_t>(digest.data()) ^
                   get_le<uint64_t>(digest.data() + 8);
  for (double& a : acc) {
    const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    a += 2.0 * u - 1.0;
  }
}

float step_ulps(float f, int k) {
  const float toward =
      k > 0 ? std::copysign(std::numeric_limits<float>::infinity(), f)
            : std::copysign(0.0f, f);
  for (int j = 0; j < std::abs(k); ++j) f = std::nextafter(f, toward);
  return f;
}

// Rounds to f32, then adjusts components by single ulps (largest first, so
// coarse steps come before fine ones) until the stored float vector has unit
// norm when measured in double precision.
Embedding to_unit_float(const std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  Embedding out(v.size());
  double sum_sq = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(v[i] / norm);
    sum_sq += static_cast<double>(out[i]) * out[i];
  }
  std::vector<size_t> order(out.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(out[a]) > std::abs(out[b]);
  });
  constexpr double kGoal = 1e-13;
  for (bool moved = true; moved && std::abs(sum_sq - 1.0) > kGoal;) {
    moved = false;
    for (size_t i : order) {
      if (std::abs(sum_sq - 1.0) <= kGoal) break;
      const float f = out[i];
      if (f == 0.0f) continue;
      const float g = step_ulps(f, sum_sq < 1.0 ? 1 : -1);
      const double candidate = sum_sq - static_cast<double>(f) * f +
                               static_cast<double>(g) * g;
      if (std::abs(candidate - 1.0) < std::abs(sum_sq - 1.0)) {
        out[i] = g;
        sum_sq = candidate;
        moved = true;
      }
    }
  }
  // Very short vectors have too few components for single steps to land
  // close enough; search joint offsets of the two largest components.
  if (std::abs(sum_sq - 1.0) > 1e-10 && out.size() >= 2) {
    const size_t a = order[0], b = order[1];
    const float fa = out[a], fb = out[b];
    const double rest = sum_sq - static_cast<double>(fa) * fa -
                        static_cast<double>(fb) * fb;
    double best = std::abs(sum_sq - 1.0);
    for (int da = -64; da <= 64; ++da) {
      const float ga = step_ulps(fa, da);
      for (int db = -64; db <= 64; ++db) {
        const float gb = step_ulps(fb, db);
        const double candidate = rest + static_cast<double>(ga) * ga +
                                 static_cast<double>(gb) * gb;
        if (std::abs(candidate - 1.0) < best) {
          best = std::abs(candidate - 1.0);
          out[a] = ga;
          out[b] = gb;
          sum_sq = candidate;
        }
      }
    }
  }
  return out;
}

}  // namespace

TestEmbedder::TestEmbedder(std::size_t dim, uint64_t seed)
    : dim_(dim), seed_(seed),
      id_("test-embedder/dim=" + std::to_string(dim) +
          "/seed=" + std::to_string(seed)) {
  if (dim == 0) throw ConfigError("test embedder dimension must be positive");
}

Embedding TestEmbedder::embed(const PreprocessedText& text) const {
  return embed_string(text.text());
}

Embedding TestEmbedder::embed_string(std::string_view text) const {
  std::vector<double> acc(dim_, 0.0);
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    size_t end = text.find(' ', i);
    if (end == std::string_view::npos) end = text.size();
    add_direction(acc, seed_, std::string("tok\x1f") += text.substr(i, end - i));
    i = end;
  }
  add_direction(acc, seed_, std::string("txt\x1f") += text);
  return to_unit_float(acc);
}

std::shared_ptr<const EmbeddingProvider> test_embedder(std::size_t dim,
                                                       uint64_t seed) {
  return std::make_shared<TestEmbedder>(dim, seed);
}

Embedding pool_hidden_states(
    const std::vector<std::vector<std::vector<float>>>& hidden_states,
    const PoolingOptions& options) {
  if (options.pooled_layers == 0 ||
      options.pooled_layers > options.encoder_layers) {
    throw ConfigError("pooled_layers must be in [1, encoder_layers]");
  }
  if (options.max_tokens == 0) throw ConfigError("max_tokens must be positive");
  size_t first_encoder_layer = 0;
  if (hidden_states.size() == options.encoder_layers + 1) {
    first_encoder_layer = 1;
  } else if (hidden_states.size() != options.encoder_layers) {
    throw DataError("expected " + std::to_string(options.encoder_layers) +
                    " encoder layers, got " +
                    std::to_string(hidden_states.size()));
  }
  const size_t begin = first_encoder_layer + options.encoder_layers -
                       options.pooled_layers;
  const size_t end = first_encoder_layer + options.encoder_layers;

  size_t dim = 0;
  std::vector<double> sentence;
  for (size_t layer = begin; layer < end; ++layer) {
    const auto& tokens = hidden_states[layer];
    if (tokens.empty()) throw DataError("hidden state layer has no tokens");
    const size_t used = options.mode == PoolingMode::kFirstToken
                            ? 1
                            : std::min(tokens.size(), options.max_tokens);
    if (dim == 0) {
      dim = tokens[0].size();
      if (dim == 0) throw DataError("hidden state width is zero");
      sentence.assign(dim, 0.0);
    }
    std::vector<double> layer_mean(dim, 0.0);
    for (size_t t = 0; t < used; ++t) {
      if (tokens[t].size() != dim) throw DataError("ragged hidden states");
      for (size_t d = 0; d < dim; ++d) layer_mean[d] += tokens[t][d];
    }
    for (size_t d = 0; d < dim; ++d) {
      sentence[d] += layer_mean[d] / static_cast<double>(used);
    }
  }
  Embedding out(dim);
  for (size_t d = 0; d < dim; ++d) {
    out[d] = static_cast<float>(sentence[d] /
                                static_cast<double>(options.pooled_layers));
  }
  return out;
}

FeatureVector::FeatureVector(std::span<const float> transformer_part,
                             std::span<const float> sentence_part) {
  if (transformer_part.size() != kTransformerDim ||
      sentence_part.size() != kSentenceDim) {
    throw ConfigError("feature parts must be " +
                      std::to_string(kTransformerDim) + " + " +
                      std::to_string(kSentenceDim) + " wide, got " +
                      std::to_string(transformer_part.size()) + " + " +
                      std::to_string(sentence_part.size()));
  }
  combined_.reserve(kFeatureDim);
  combined_.insert(combined_.end(), transformer_part.begin(),
                   transformer_part.end());
  combined_.insert(combined_.end(), sentence_part.begin(),
                   sentence_part.end());
  for (float x : combined_) {
    if (!std::isfinite(x)) throw DataError("non-finite embedding component");
  }
}

FeatureExtractor::FeatureExtractor(
    std::shared_ptr<const EmbeddingProvider> transformer,
    std::shared_ptr<const EmbeddingProvider> sentence, FeatureCache* cache)
    : transformer_(std::move(transformer)), sentence_(std::move(sentence)),
      cache_(cache) {
  if (!transformer_ || !sentence_) throw ConfigError("missing provider");
  if (transformer_->output_dim() != kTransformerDim ||
      sentence_->output_dim() != kSentenceDim) {
    throw ConfigError(
        "provider dimensions must be (" + std::to_string(kTransformerDim) +
        ", " + std::to_string(kSentenceDim) + "), got (" +
        std::to_string(transformer_->output_dim()) + ", " +
        std::to_string(sentence_->output_dim()) + ")");
  }
}

Embedding FeatureExtractor::run(const EmbeddingProvider& provider,
                                const PreprocessedText& text) const {
  Embedding v = cache_ ? cache_->get_or_compute(text, provider)
                       : provider.embed(text);
  if (v.size() != provider.output_dim()) {
    throw BackendError("provider " + provider.provider_id() + " returned " +
                       std::to_string(v.size()) + " values, expected " +
                       std::to_string(provider.output_dim()));
  }
  return v;
}

FeatureVector FeatureExtractor::extract(const PreprocessedText& text) const {
  const Embedding t = run(*transformer_, text);
  const Embedding s = run(*sentence_, text);
  return FeatureVector(t, s);
}

std::vector<FeatureVector> FeatureExtractor::extract_batch(
    std::span<const PreprocessedText> texts, std::size_t num_threads) const {
  const bool parallel = num_threads > 1 && texts.size() > 1 &&
                        transformer_->concurrent_calls_ok() &&
                        sentence_->concurrent_calls_ok();
  if (!parallel) {
    std::vector<FeatureVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(extract(t));
    return out;
  }

  const size_t workers = std::min(num_threads, texts.size());
  std::vector<std::optional<FeatureVector>> slots(texts.size());
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t i = w; i < texts.size(); i += workers) {
            slots[i].emplace(extract(texts[i]));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<FeatureVector> out;
  out.reserve(texts.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace hatemon
