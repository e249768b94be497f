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

#ifndef KEYSUM_ERROR_H_
#define KEYSUM_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace keysum {

// Base class for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A record in an input file could not be decoded. `line` is 1-based; `field`
// is empty when the line itself is malformed.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, std::string field,
             const std::string &what);

  const std::string &path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string &field() const { return field_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string field_;
};

}  // namespace keysum

#endif  // KEYSUM_ERROR_H_
