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

#ifndef HATEMON_ERRORS_H_
#define HATEMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hatemon {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kBackend = 3,
  kIo = 4,
};

// Base class of every error the library throws. Each subclass maps onto one
// exit code so the CLI can translate failures without inspecting messages.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Bad configuration or bad arguments (exit 1).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ExitCode::kUsage, what) {}
};

// Malformed input data, label violations, dimension mismatches and corrupt
// model files (exit 2).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

// Model containers failing magic, version or checksum validation.
class FormatError : public DataError {
 public:
  explicit FormatError(const std::string& what) : DataError(what) {}
};

// Embedding backend unavailable or misbehaving (exit 3).
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what)
      : Error(ExitCode::kBackend, what) {}
};

// Filesystem failures (exit 4).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::kIo, what) {}
};

}  // namespace hatemon

#endif  // HATEMON_ERRORS_H_
