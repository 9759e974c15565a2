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

#include "hatemon/digest.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <climits>

#include "hatemon/errors.h"

namespace hatemon {

Digest256 sha256(std::string_view data) {
  Digest256 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error(ExitCode::kBackend, "SHA-256 computation failed");
  }
  return out;
}

std::string to_hex(std::span<const uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

uint32_t crc32(std::span<const uint8_t> data, uint32_t seed) {
  uLong crc = seed;
  const uint8_t* p = data.data();
  size_t remaining = data.size();
  while (remaining > 0) {
    const auto chunk = static_cast<uInt>(std::min<size_t>(remaining, UINT_MAX));
    crc = ::crc32(crc, p, chunk);
    p += chunk;
    remaining -= chunk;
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace hatemon
