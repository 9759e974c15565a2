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

// Hashing, checksums and little-endian helpers used by the on-disk formats.

#ifndef HATEMON_DIGEST_H_
#define HATEMON_DIGEST_H_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

namespace hatemon {

using Digest256 = std::array<uint8_t, 32>;

Digest256 sha256(std::string_view data);
std::string to_hex(std::span<const uint8_t> bytes);

// CRC-32 (IEEE, as in zlib). `seed` continues a running checksum.
uint32_t crc32(std::span<const uint8_t> data, uint32_t seed = 0);
inline uint32_t crc32(std::string_view data, uint32_t seed = 0) {
  return crc32(std::span<const uint8_t>(
                   reinterpret_cast<const uint8_t*>(data.data()), data.size()),
               seed);
}

// Appends `value` to `out` in little-endian byte order.
template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

// Reads a little-endian T from the first sizeof(T) bytes of `in`.
template <typename T>
T get_le(const void* in) {
  static_assert(std::is_trivially_copyable_v<T>);
  uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, in, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

// SplitMix64 step; used wherever a tiny portable PRNG is enough.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace hatemon

#endif  // HATEMON_DIGEST_H_
