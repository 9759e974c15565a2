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

#include "hatemon/remote_provider.h"

#include <httplib.h>

#include <cctype>
#include <cmath>
#include <json.hpp>

#include "hatemon/errors.h"

namespace hatemon {

namespace {

using nlohmann::json;

std::string language_code(Language language) {
  std::string code(to_string(language));
  for (char& c : code) c = static_cast<char>(std::tolower(c));
  return code;
}

json post_json(const HttpEndpoint& endpoint, const std::string& provider_id,
               const json& body) {
  httplib::Client client(endpoint.base_url);
  client.set_connection_timeout(endpoint.timeout_seconds, 0);
  client.set_read_timeout(endpoint.timeout_seconds, 0);
  auto res = client.Post(endpoint.path, body.dump(), "application/json");
  if (!res) {
    throw BackendError(provider_id + ": cannot reach " + endpoint.base_url +
                       endpoint.path + " (" + httplib::to_string(res.error()) +
                       ")");
  }
  if (res->status != 200) {
    throw BackendError(provider_id + ": backend answered HTTP " +
                       std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw BackendError(provider_id + ": malformed backend response: " +
                       e.what());
  }
}

Embedding checked(Embedding v, std::size_t dim,
                  const std::string& provider_id) {
  if (v.size() != dim) {
    throw BackendError(provider_id + ": backend returned " +
                       std::to_string(v.size()) + " values, expected " +
                       std::to_string(dim));
  }
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw BackendError(provider_id + ": backend returned non-finite value");
    }
  }
  return v;
}

}  // namespace

HttpTransformerProvider::HttpTransformerProvider(std::string provider_id,
                                                 HttpEndpoint endpoint,
                                                 PoolingOptions pooling,
                                                 std::size_t output_dim)
    : id_(std::move(provider_id)), endpoint_(std::move(endpoint)),
      pooling_(pooling), dim_(output_dim) {}

Embedding HttpTransformerProvider::embed(const PreprocessedText& text) const {
  json body = {{"text", text.text()},
               {"language", language_code(text.language())},
               {"max_tokens", pooling_.max_tokens}};
  json reply = post_json(endpoint_, id_, body);
  std::vector<std::vector<std::vector<float>>> hidden;
  try {
    hidden = reply.at("hidden_states")
                 .get<std::vector<std::vector<std::vector<float>>>>();
  } catch (const json::exception& e) {
    throw BackendError(id_ + ": response lacks hidden_states: " + e.what());
  }
  try {
    return checked(pool_hidden_states(hidden, pooling_), dim_, id_);
  } catch (const DataError& e) {
    throw BackendError(id_ + ": " + e.what());
  }
}

HttpSentenceProvider::HttpSentenceProvider(std::string provider_id,
                                           HttpEndpoint endpoint,
                                           std::size_t output_dim)
    : id_(std::move(provider_id)), endpoint_(std::move(endpoint)),
      dim_(output_dim) {}

Embedding HttpSentenceProvider::embed(const PreprocessedText& text) const {
  json body = {{"text", text.text()},
               {"language", language_code(text.language())}};
  json reply = post_json(endpoint_, id_, body);
  try {
    return checked(reply.at("embedding").get<Embedding>(), dim_, id_);
  } catch (const json::exception& e) {
    throw BackendError(id_ + ": response lacks embedding: " + e.what());
  }
}

}  // namespace hatemon
