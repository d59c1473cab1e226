// Copyright 2026 The cesaro-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CESARO_ERRORS_HPP_
#define CESARO_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cesaro {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A parameter record violates one of its invariants. `field()` names the
/// offending parameter ("delta", "gamma", ...).
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The operation has no implementation for the requested sequence family.
class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid Monte Carlo or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path.empty() ? message : path + ": " + message),
        path_(std::move(path)),
        detail_(message) {}

  const std::string& path() const noexcept { return path_; }
  /// The message without the path prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string path_;
  std::string detail_;
};

/// A replication failed inside the worker pool.
class WorkerError : public std::runtime_error {
 public:
  WorkerError(std::uint64_t replication, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) +
                           ": " + what),
        replication_(replication) {}

  std::uint64_t replication() const noexcept { return replication_; }

 private:
  std::uint64_t replication_;
};

}  // namespace cesaro

#endif  // CESARO_ERRORS_HPP_
