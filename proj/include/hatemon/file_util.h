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

#ifndef HATEMON_FILE_UTIL_H_
#define HATEMON_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace hatemon {

// Throws IoError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// Writes `contents` to a temporary sibling and renames it over `path`, so
// readers see either the old file or the complete new one. Creates missing
// parent directories. Throws IoError; the temporary is removed on failure.
void write_file_atomically(const std::filesystem::path& path,
                           std::string_view contents);

}  // namespace hatemon

#endif  // HATEMON_FILE_UTIL_H_
