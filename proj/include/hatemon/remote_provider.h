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

// Embedding providers backed by a local inference runner over HTTP.
//
// Transformer runner:  POST {path}  {"text": s, "language": "en",
//                                     "max_tokens": n}
//                      200 -> {"hidden_states": [[[f, ...], ...], ...]}
// Sentence runner:     POST {path}  {"text": s, "language": "en"}
//                      200 -> {"embedding": [f, ...]}
//
// Pooling of the hidden states happens here, not in the runner, so the
// runner only has to expose the raw encoder outputs.

#ifndef HATEMON_REMOTE_PROVIDER_H_
#define HATEMON_REMOTE_PROVIDER_H_

#include <string>

#include "hatemon/embed.h"

namespace hatemon {

struct HttpEndpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8765"
  std::string path;      // e.g. "/transformer"
  int timeout_seconds = 60;
};

class HttpTransformerProvider final : public EmbeddingProvider {
 public:
  HttpTransformerProvider(std::string provider_id, HttpEndpoint endpoint,
                          PoolingOptions pooling,
                          std::size_t output_dim = kTransformerDim);

  const std::string& provider_id() const override { return id_; }
  std::size_t output_dim() const override { return dim_; }
  Embedding embed(const PreprocessedText& text) const override;

 private:
  std::string id_;
  HttpEndpoint endpoint_;
  PoolingOptions pooling_;
  std::size_t dim_;
};

class HttpSentenceProvider final : public EmbeddingProvider {
 public:
  HttpSentenceProvider(std::string provider_id, HttpEndpoint endpoint,
                       std::size_t output_dim = kSentenceDim);

  const std::string& provider_id() const override { return id_; }
  std::size_t output_dim() const override { return dim_; }
  Embedding embed(const PreprocessedText& text) const override;

 private:
  std::string id_;
  HttpEndpoint endpoint_;
  std::size_t dim_;
};

}  // namespace hatemon

#endif  // HATEMON_REMOTE_PROVIDER_H_
