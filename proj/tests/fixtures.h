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

#ifndef KEYSUM_TESTS_FIXTURES_H_
#define KEYSUM_TESTS_FIXTURES_H_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "keysum/corpus.h"
#include "json.hpp"
#include "keysum/entity_io.h"
#include "keysum/text.h"

namespace keysum::testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(KEYSUM_TEST_DATA_DIR); }

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "keysum-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const fs::path &path() const { return path_; }
  fs::path operator/(const std::string &name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path &path, const std::string &content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One row of the entity-ratio table over 500 validation dialogues.
struct Table1Row {
  const char *etype;
  const char *ratio;
  std::size_t dialogue;
  std::size_t summary;
  const char *surface;
};

inline const std::vector<Table1Row> &table1_rows() {
  static const std::vector<Table1Row> rows = {
      {"PERSON", "0.839", 186, 156, "Tom"},
      {"GPE", "0.481", 81, 39, "Paris"},
      {"LANGUAGE", "0.474", 19, 9, "French"},
      {"ORG", "0.411", 56, 23, "Google"},
      {"FAC", "0.350", 20, 7, "the Airport"},
      {"NORP", "0.333", 42, 14, "Chinese"},
      {"DATE", "0.311", 183, 57, "Monday"},
      {"MONEY", "0.182", 55, 10, "five dollars"},
      {"ORDINAL", "0.180", 50, 9, "first"},
      {"CARDINAL", "0.172", 145, 25, "three"},
      {"TIME", "0.143", 112, 16, "noon"},
      {"LOC", "0.071", 14, 1, "the Alps"},
  };
  return rows;
}

struct SpanFixture {
  std::vector<Sample> samples;
  std::vector<EntitySpan> spans;
};

// 500 dialogues whose span presence reproduces the table counts. Row k is
// mentioned in the documents of samples (37k + 7i) mod 500 for i < dialogue,
// and in the summaries of the first `summary` of those. Every fifth
// mention is repeated so per-sample counting is exercised. Documents carry
// non-ASCII text so code-point offsets differ from byte offsets.
inline SpanFixture make_table1_fixture() {
  constexpr std::size_t kSamples = 500;
  const auto &rows = table1_rows();
  std::vector<std::vector<std::pair<std::size_t, int>>> doc_mentions(kSamples);
  std::vector<std::vector<std::size_t>> sum_mentions(kSamples);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].dialogue; ++i) {
      const std::size_t n = (37 * k + 7 * i) % kSamples;
      doc_mentions[n].push_back({k, i % 5 == 0 ? 2 : 1});
      if (i < rows[k].summary) sum_mentions[n].push_back(k);
    }
  }

  SpanFixture f;
  for (std::size_t n = 0; n < kSamples; ++n) {
    const std::string id = "dev_" + std::to_string(n);
    std::u32string doc = text::to_u32("#Person1#: Café ☕ talk №" +
                                      std::to_string(n) + ".");
    std::u32string sum = text::to_u32("Summary " + std::to_string(n) + ":");
    auto mention = [&](std::u32string &text, std::size_t k, EntityRole role) {
      text += U" ";
      const std::u32string surface = text::to_u32(rows[k].surface);
      const std::size_t start = text.size();
      text += surface;
      f.spans.push_back({id, role, start, text.size(), rows[k].etype,
                         rows[k].surface, "fixture"});
    };
    for (const auto &[k, times] : doc_mentions[n]) {
      for (int t = 0; t < times; ++t) {
        doc += U"\n#Person2#: about";
        mention(doc, k, EntityRole::kDocument);
        doc += U".";
      }
    }
    for (std::size_t k : sum_mentions[n]) {
      mention(sum, k, EntityRole::kSummary);
      sum += U";";
    }
    f.samples.push_back({id, text::to_utf8(doc), text::to_utf8(sum),
                         std::nullopt, DomainTag::kDialogue});
  }
  return f;
}

inline std::string corpus_jsonl(const std::vector<Sample> &samples) {
  std::string out;
  for (const Sample &s : samples) {
    nlohmann::ordered_json j;
    j["fname"] = s.id;
    j["dialogue"] = s.document;
    j["summary"] = s.summary;
    if (s.topic) j["topic"] = *s.topic;
    out += j.dump() + "\n";
  }
  return out;
}

inline std::string spans_jsonl(const std::vector<EntitySpan> &spans) {
  std::ostringstream out;
  write_spans(out, spans);
  return out.str();
}

// Random text from a pool mixing ASCII, accented Latin, CJK, emoji,
// literal angle brackets and sentence punctuation.
inline std::u32string random_unicode(std::mt19937_64 &rng, std::size_t max_len) {
  static const std::u32string pool =
      U"abcdefghij KLMNOP xyz 0123 ... ?! <> éüñçß 漢字テスト 😀🎉 ’'\"\n\t—";
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::u32string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += pool[pick(rng)];
  return s;
}

}  // namespace keysum::testing

#endif  // KEYSUM_TESTS_FIXTURES_H_
