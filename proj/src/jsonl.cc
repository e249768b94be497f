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

#include "keysum/jsonl.h"

#include <istream>
#include <system_error>

#include "keysum/error.h"

namespace keysum {

namespace {

std::string describe(const std::string &path, std::size_t line,
                     const std::string &field, const std::string &what) {
  std::string msg = path + ":" + std::to_string(line) + ": ";
  if (!field.empty()) msg += "field '" + field + "': ";
  return msg + what;
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line, std::string field,
                       const std::string &what)
    : Error(describe(path, line, field, what)),
      path_(std::move(path)),
      line_(line),
      field_(std::move(field)) {}

namespace jsonl {

void Record::fail(const std::string &field, const std::string &what) const {
  throw ParseError(path, line, field, what);
}

bool Record::has(const std::string &field) const {
  return value.contains(field) && !value.at(field).is_null();
}

std::string Record::string(const std::string &field) const {
  if (!has(field)) fail(field, "missing required field");
  const Json &v = value.at(field);
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> Record::optional_string(
    const std::string &field) const {
  if (!has(field)) return std::nullopt;
  const Json &v = value.at(field);
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

std::int64_t Record::integer(const std::string &field) const {
  if (!has(field)) fail(field, "missing required field");
  const Json &v = value.at(field);
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<std::int64_t>();
}

double Record::number(const std::string &field) const {
  if (!has(field)) fail(field, "missing required field");
  const Json &v = value.at(field);
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

void read(std::istream &in, const std::string &path,
          const std::function<void(const Record &)> &fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::parse_error &e) {
      throw ParseError(path, lineno, "", std::string("malformed JSON: ") +
                                             e.what());
    }
    if (!value.is_object()) {
      throw ParseError(path, lineno, "", "expected a JSON object");
    }
    fn(Record{value, path, lineno});
  }
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

void read_file(const std::filesystem::path &path,
               const std::function<void(const Record &)> &fn) {
  std::ifstream in = open_input(path);
  read(in, path.string(), fn);
}

OutputSet::~OutputSet() {
  streams_.clear();
  if (committed_) return;
  for (const auto &tmp : temps_) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
  }
}

std::ostream &OutputSet::open(const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".partial";
  auto out = std::make_unique<std::ofstream>(tmp, std::ios::binary |
                                                      std::ios::trunc);
  if (!*out) throw Error("cannot write '" + path.string() + "'");
  finals_.push_back(path);
  temps_.push_back(tmp);
  streams_.push_back(std::move(out));
  return *streams_.back();
}

void OutputSet::commit() {
  for (auto &s : streams_) {
    s->flush();
    if (!*s) throw Error("write failed");
    s->close();
  }
  for (std::size_t i = 0; i < temps_.size(); ++i) {
    std::filesystem::rename(temps_[i], finals_[i]);
  }
  committed_ = true;
}

void write_file(const std::filesystem::path &path,
                const std::function<void(std::ostream &)> &fn) {
  OutputSet out;
  fn(out.open(path));
  out.commit();
}

}  // namespace jsonl
}  // namespace keysum
