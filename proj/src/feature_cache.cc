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

#include "hatemon/feature_cache.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <string>

#include "hatemon/errors.h"

namespace hatemon {

namespace {

constexpr std::size_t kRecordFixed = 32 + 4 + 4;  // key, dim, crc
constexpr uint32_t kMaxDim = 1u << 24;

std::string errno_text() { return std::strerror(errno); }

void read_exact(int fd, uint64_t offset, void* buf, std::size_t n,
                const std::filesystem::path& path) {
  auto* p = static_cast<char*>(buf);
  while (n > 0) {
    ssize_t got = ::pread(fd, p, n, static_cast<off_t>(offset));
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) {
      throw IoError("short read from cache " + path.string() + ": " +
                    (got < 0 ? errno_text() : std::string("end of file")));
    }
    p += got;
    n -= static_cast<std::size_t>(got);
    offset += static_cast<uint64_t>(got);
  }
}

std::string encode_record(const Digest256& key, std::span<const float> v) {
  std::string rec;
  rec.reserve(kRecordFixed + v.size() * 4);
  rec.append(reinterpret_cast<const char*>(key.data()), key.size());
  put_le<uint32_t>(rec, static_cast<uint32_t>(v.size()));
  for (float x : v) put_le<float>(rec, x);
  put_le<uint32_t>(rec, crc32(rec));
  return rec;
}

}  // namespace

FeatureCache::FeatureCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::error_code ec;
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw IoError("cannot open cache " + path_.string() + ": " + errno_text());
  }
  try {
    scan();
  } catch (...) {
    ::close(fd_);
    throw;
  }
}

FeatureCache::~FeatureCache() {
  if (fd_ >= 0) ::close(fd_);
}

void FeatureCache::write_at(uint64_t offset, const std::string& bytes) {
  const char* p = bytes.data();
  std::size_t n = bytes.size();
  while (n > 0) {
    ssize_t put = ::pwrite(fd_, p, n, static_cast<off_t>(offset));
    if (put < 0 && errno == EINTR) continue;
    if (put <= 0) {
      throw IoError("cannot write cache " + path_.string() + ": " +
                    errno_text());
    }
    p += put;
    n -= static_cast<std::size_t>(put);
    offset += static_cast<uint64_t>(put);
  }
}

void FeatureCache::scan() {
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    throw IoError("cannot stat cache " + path_.string() + ": " + errno_text());
  }
  const auto file_size = static_cast<uint64_t>(st.st_size);
  if (file_size == 0) {
    std::string header(kCacheMagic, sizeof(kCacheMagic));
    put_le<uint16_t>(header, kCacheVersion);
    put_le<uint8_t>(header, 4);
    write_at(0, header);
    end_ = header.size();
    return;
  }
  if (file_size < kCacheHeaderSize) {
    throw DataError(path_.string() + " is not a feature cache (too short)");
  }
  char header[kCacheHeaderSize];
  read_exact(fd_, 0, header, sizeof(header), path_);
  if (std::memcmp(header, kCacheMagic, sizeof(kCacheMagic)) != 0) {
    throw DataError(path_.string() + " is not a feature cache (bad magic)");
  }
  const auto version = get_le<uint16_t>(header + 4);
  if (version != kCacheVersion) {
    throw DataError(path_.string() + ": unsupported cache version " +
                    std::to_string(version));
  }
  if (get_le<uint8_t>(header + 6) != 4) {
    throw DataError(path_.string() + ": unsupported float width");
  }

  uint64_t offset = kCacheHeaderSize;
  std::string buf;
  while (offset < file_size) {
    if (file_size - offset < 36) break;
    char head[36];
    read_exact(fd_, offset, head, sizeof(head), path_);
    const auto dim = get_le<uint32_t>(head + 32);
    const uint64_t record_size = kRecordFixed + uint64_t{dim} * 4;
    if (dim == 0 || dim > kMaxDim || file_size - offset < record_size) break;
    buf.resize(record_size);
    read_exact(fd_, offset, buf.data(), buf.size(), path_);
    Digest256 key;
    std::memcpy(key.data(), buf.data(), key.size());
    const auto stored = get_le<uint32_t>(buf.data() + record_size - 4);
    if (crc32(std::string_view(buf.data(), record_size - 4)) == stored) {
      index_[key] = {offset, dim};
      corrupt_.erase(key);
    } else {
      corrupt_[key] = {offset, dim};
      index_.erase(key);
      ++corrupt_seen_;
    }
    offset += record_size;
  }
  if (offset < file_size) {
    // Torn tail from an interrupted write.
    if (::ftruncate(fd_, static_cast<off_t>(offset)) != 0) {
      throw IoError("cannot truncate cache " + path_.string() + ": " +
                    errno_text());
    }
  }
  end_ = offset;
}

Digest256 FeatureCache::key_for(std::string_view provider_id,
                                std::string_view text) {
  std::string material(provider_id);
  material.push_back('\0');
  material.append(text);
  return sha256(material);
}

std::optional<Embedding> FeatureCache::lookup(const Digest256& key) const {
  Slot slot;
  {
    std::shared_lock lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    slot = it->second;
  }
  const std::size_t record_size = kRecordFixed + std::size_t{slot.dim} * 4;
  std::string buf(record_size, '\0');
  read_exact(fd_, slot.offset, buf.data(), buf.size(), path_);
  const auto stored = get_le<uint32_t>(buf.data() + record_size - 4);
  const bool key_ok = std::memcmp(buf.data(), key.data(), key.size()) == 0;
  if (!key_ok ||
      crc32(std::string_view(buf.data(), record_size - 4)) != stored) {
    std::unique_lock lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end() && it->second.offset == slot.offset) {
      corrupt_[key] = slot;
      index_.erase(it);
      ++corrupt_seen_;
    }
    return std::nullopt;
  }
  Embedding out(slot.dim);
  for (std::size_t i = 0; i < slot.dim; ++i) {
    out[i] = get_le<float>(buf.data() + 36 + i * 4);
  }
  return out;
}

void FeatureCache::store(const Digest256& key, std::span<const float> vector) {
  if (vector.empty() || vector.size() > kMaxDim) {
    throw DataError("cannot cache a vector of length " +
                    std::to_string(vector.size()));
  }
  const std::string record = encode_record(key, vector);
  const auto dim = static_cast<uint32_t>(vector.size());
  std::unique_lock lock(mu_);
  auto bad = corrupt_.find(key);
  if (bad != corrupt_.end() && bad->second.dim == dim) {
    const Slot slot = bad->second;
    write_at(slot.offset, record);
    corrupt_.erase(bad);
    index_[key] = slot;
    return;
  }
  write_at(end_, record);
  index_[key] = {end_, dim};
  end_ += record.size();
}

Embedding FeatureCache::get_or_compute(const PreprocessedText& text,
                                       const EmbeddingProvider& provider) {
  const Digest256 key = key_for(provider.provider_id(), text.text());
  if (auto hit = lookup(key)) {
    ++hits_;
    return std::move(*hit);
  }
  ++misses_;
  Embedding computed = provider.embed(text);
  store(key, computed);
  return computed;
}

std::size_t FeatureCache::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

FeatureCache::Counters FeatureCache::counters() const {
  return {hits_.load(), misses_.load(), corrupt_seen_.load()};
}

}  // namespace hatemon
