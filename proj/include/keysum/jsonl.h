// Copyright 2026 The keysum Authors.
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

#ifndef KEYSUM_JSONL_H_
#define KEYSUM_JSONL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace keysum::jsonl {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// One decoded line of a JSONL file, with enough context to raise
// ParseErrors that point back at it.
struct Record {
  const Json &value;
  const std::string &path;
  std::size_t line;

  [[noreturn]] void fail(const std::string &field,
                         const std::string &what) const;

  bool has(const std::string &field) const;
  std::string string(const std::string &field) const;
  std::optional<std::string> optional_string(const std::string &field) const;
  std::int64_t integer(const std::string &field) const;
  double number(const std::string &field) const;
};

// Calls `fn` for every non-blank line. `path` is used in error messages
// only. Lines that are not JSON objects raise ParseError.
void read(std::istream &in, const std::string &path,
          const std::function<void(const Record &)> &fn);
void read_file(const std::filesystem::path &path,
               const std::function<void(const Record &)> &fn);

std::ifstream open_input(const std::filesystem::path &path);

// Writes files as a group: everything goes to sibling temporaries which are
// renamed into place by commit(). Uncommitted temporaries are removed on
// destruction.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet &) = delete;
  OutputSet &operator=(const OutputSet &) = delete;
  ~OutputSet();

  std::ostream &open(const std::filesystem::path &path);
  void commit();
  const std::vector<std::filesystem::path> &paths() const { return finals_; }

 private:
  std::vector<std::filesystem::path> finals_;
  std::vector<std::filesystem::path> temps_;
  std::vector<std::unique_ptr<std::ofstream>> streams_;
  bool committed_ = false;
};

// Writes a single file atomically.
void write_file(const std::filesystem::path &path,
                const std::function<void(std::ostream &)> &fn);

}  // namespace keysum::jsonl

#endif  // KEYSUM_JSONL_H_
