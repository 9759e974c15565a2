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

// Persistent embedding cache.
//
// A single append-mostly file:
//
//   header  : "EMBC" | version u16 | float width u8 (= 4)
//   record* : key[32] | dim u32 | dim x f32 | crc32 u32
//
// All integers and floats are little-endian. The key is SHA-256 of the
// provider id and the preprocessed text; the CRC covers key, dim and payload.
// Records failing their checksum are treated as misses and rewritten in place
// on the next store. A torn record at the tail is cut off when the file is
// opened.

#ifndef HATEMON_FEATURE_CACHE_H_
#define HATEMON_FEATURE_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string_view>

#include "hatemon/digest.h"
#include "hatemon/embed.h"

namespace hatemon {

inline constexpr char kCacheMagic[4] = {'E', 'M', 'B', 'C'};
inline constexpr uint16_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderSize = 7;

class FeatureCache {
 public:
  // Opens `path`, creating it (and its parent directory) when missing.
  // Throws IoError on filesystem failures and DataError when the header is
  // not a cache header of this version.
  explicit FeatureCache(std::filesystem::path path);
  ~FeatureCache();

  FeatureCache(const FeatureCache&) = delete;
  FeatureCache& operator=(const FeatureCache&) = delete;

  static Digest256 key_for(std::string_view provider_id,
                           std::string_view text);

  // Stored vector for `key`, or nullopt on a miss or a checksum failure.
  std::optional<Embedding> lookup(const Digest256& key) const;
  void store(const Digest256& key, std::span<const float> vector);

  // Hit: the stored vector, bit for bit. Miss: computes with `provider`,
  // persists, returns.
  Embedding get_or_compute(const PreprocessedText& text,
                           const EmbeddingProvider& provider);

  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

  struct Counters {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t corrupt = 0;  // checksum failures seen (at open or lookup)
  };
  Counters counters() const;

 private:
  struct Slot {
    uint64_t offset;  // start of the record
    uint32_t dim;
  };

  void scan();
  void write_at(uint64_t offset, const std::string& bytes);

  std::filesystem::path path_;
  int fd_ = -1;
  uint64_t end_ = 0;
  mutable std::shared_mutex mu_;
  mutable std::map<Digest256, Slot> index_;
  mutable std::map<Digest256, Slot> corrupt_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
  mutable std::atomic<std::size_t> corrupt_seen_{0};
};

}  // namespace hatemon

#endif  // HATEMON_FEATURE_CACHE_H_
