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

// Sentence embeddings and the concatenated 1792-d feature vector.
//
// Two frozen encoders feed the classifier: a multilingual masked-LM encoder
// (768-d, pooled from its hidden states) and a language-agnostic sentence
// encoder (1024-d). Their outputs are concatenated, transformer part first.

#ifndef HATEMON_EMBED_H_
#define HATEMON_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hatemon/preprocess.h"

namespace hatemon {

class FeatureCache;

using Embedding = std::vector<float>;

inline constexpr std::size_t kTransformerDim = 768;
inline constexpr std::size_t kSentenceDim = 1024;
inline constexpr std::size_t kFeatureDim = kTransformerDim + kSentenceDim;

// A frozen encoder. Implementations must return exactly output_dim() finite
// values, and equal (provider_id, text) must always give equal vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual const std::string& provider_id() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual Embedding embed(const PreprocessedText& text) const = 0;

  // False when calls must be serialized; the extractor then never calls
  // embed() from more than one thread.
  virtual bool concurrent_calls_ok() const { return true; }
};

// Deterministic stand-in encoder for tests and CI.
//
// The vector for a text is the sum of a pseudo-random direction per
// whitespace token plus one direction for the whole string, all derived from
// SHA-256 of (seed, token). Texts sharing tokens therefore land near each
// other, which lets synthetic corpora carry learnable signal, while distinct
// strings still get distinct vectors. The result is unit norm.
class TestEmbedder final : public EmbeddingProvider {
 public:
  TestEmbedder(std::size_t dim, uint64_t seed);

  const std::string& provider_id() const override { return id_; }
  std::size_t output_dim() const override { return dim_; }
  Embedding embed(const PreprocessedText& text) const override;

  // Same as embed() for an arbitrary string.
  Embedding embed_string(std::string_view text) const;

 private:
  std::size_t dim_;
  uint64_t seed_;
  std::string id_;
};

std::shared_ptr<const EmbeddingProvider> test_embedder(std::size_t dim,
                                                       uint64_t seed);

// How a sentence vector is read off the encoder's hidden states.
enum class PoolingMode {
  kTokenMean,   // mean over token positions within each layer
  kFirstToken,  // the first ([CLS]) position of each layer
};

struct PoolingOptions {
  PoolingMode mode = PoolingMode::kTokenMean;
  std::size_t encoder_layers = 12;  // layers of the encoder stack
  std::size_t pooled_layers = 11;   // the last N encoder layers are averaged
  std::size_t max_tokens = 512;     // longer inputs are truncated
};

// hidden_states[layer][token][dim]. Either `encoder_layers` entries or
// `encoder_layers + 1` when the embedding-layer output comes first; the
// embedding-layer output never takes part in pooling. Token positions past
// max_tokens are ignored. Throws DataError on ragged or empty input.
Embedding pool_hidden_states(
    const std::vector<std::vector<std::vector<float>>>& hidden_states,
    const PoolingOptions& options = {});

// 1792-d classifier input. Immutable; the two parts are views into it.
class FeatureVector {
 public:
  // Throws ConfigError on wrong part lengths, DataError on non-finite values.
  FeatureVector(std::span<const float> transformer_part,
                std::span<const float> sentence_part);

  const std::vector<float>& combined() const { return combined_; }
  std::span<const float> transformer_part() const {
    return std::span<const float>(combined_).first(kTransformerDim);
  }
  std::span<const float> sentence_part() const {
    return std::span<const float>(combined_).subspan(kTransformerDim);
  }

 private:
  std::vector<float> combined_;
};

// Runs both encoders (through the cache when one is attached) and joins the
// results. The constructor fails fast with ConfigError unless the providers
// produce 768 and 1024 dimensions respectively.
class FeatureExtractor {
 public:
  FeatureExtractor(std::shared_ptr<const EmbeddingProvider> transformer,
                   std::shared_ptr<const EmbeddingProvider> sentence,
                   FeatureCache* cache = nullptr);

  FeatureVector extract(const PreprocessedText& text) const;

  // Output order matches input order for any thread count.
  std::vector<FeatureVector> extract_batch(
      std::span<const PreprocessedText> texts,
      std::size_t num_threads = 1) const;

  const EmbeddingProvider& transformer() const { return *transformer_; }
  const EmbeddingProvider& sentence() const { return *sentence_; }

 private:
  Embedding run(const EmbeddingProvider& provider,
                const PreprocessedText& text) const;

  std::shared_ptr<const EmbeddingProvider> transformer_;
  std::shared_ptr<const EmbeddingProvider> sentence_;
  FeatureCache* cache_;
};

}  // namespace hatemon

#endif  // HATEMON_EMBED_H_
