// Copyright 2026 The tokenbudget Authors
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

#ifndef TOKENBUDGET_ERROR_H_
#define TOKENBUDGET_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tokenbudget {

// Invalid argument or configuration (bad epsilon, empty method set, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file failed to parse. The message carries "<path>:<line>: <reason>".
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line,
             const std::string& reason)
      : DataError(path + ":" + std::to_string(line) + ": " + reason),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// Per-token spends do not compose to the document budget.
class CompositionError : public std::runtime_error {
 public:
  CompositionError(const std::string& document_id, const std::string& reason)
      : std::runtime_error("composition failure in document '" + document_id +
                           "': " + reason),
        document_id_(document_id) {}

  const std::string& document_id() const { return document_id_; }

 private:
  std::string document_id_;
};

}  // namespace tokenbudget

#endif  // TOKENBUDGET_ERROR_H_
