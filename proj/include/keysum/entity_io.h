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

#ifndef KEYSUM_ENTITY_IO_H_
#define KEYSUM_ENTITY_IO_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "keysum/corpus.h"

namespace keysum {

enum class EntityRole { kDocument, kSummary, kCandidate };

std::string to_string(EntityRole role);
EntityRole parse_entity_role(std::string_view s);

// A typed entity mention. Offsets are code points into the text selected by
// `role` (the sample's document or reference summary, or a model output).
struct EntitySpan {
  std::string sample_id;
  EntityRole role = EntityRole::kDocument;
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::string etype;
  std::string surface;
  std::string source;

  std::size_t length() const { return end_char - start_char; }
  bool operator==(const EntitySpan &) const = default;
};

// True for nonempty strings of [A-Z0-9_] starting with a letter.
bool is_valid_etype(std::string_view etype);
// The OntoNotes 5 label set.
bool is_ontonotes_label(std::string_view etype);

// Span JSONL: {sample_id, role, start_char, end_char, etype, surface,
// source}. Structural problems raise ParseError naming line and field.
std::vector<EntitySpan> load_spans(const std::filesystem::path &path);
std::vector<EntitySpan> parse_spans(std::istream &in,
                                    const std::string &origin = "<stream>");
void write_spans(std::ostream &out, const std::vector<EntitySpan> &spans);
void save_spans(const std::filesystem::path &path,
                const std::vector<EntitySpan> &spans);

struct SpanIssue {
  enum class Kind {
    kForeignSample,   // sample_id differs from the sample checked against
    kBounds,          // offsets overflow the role's text
    kMismatch,        // surface differs from the text at the offsets
    kUnknownLabel,    // warning: etype outside OntoNotes
    kUncheckedRole,   // warning: candidate text is not part of a Sample
  };
  Kind kind;
  std::size_t span_index;  // position in the list passed to validate_spans
  std::string message;
};

struct ValidationReport {
  std::vector<SpanIssue> errors;
  std::vector<SpanIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool clean() const { return errors.empty() && warnings.empty(); }
};

ValidationReport validate_spans(const Sample &sample,
                                const std::vector<EntitySpan> &spans);

// Groups spans by sample and validates each group against the corpus.
// Spans naming an unknown sample are reported as kForeignSample errors.
// Issue indices refer to positions in `spans`.
ValidationReport validate_corpus_spans(const std::vector<Sample> &samples,
                                       const std::vector<EntitySpan> &spans);

// Surface -> etype dictionary matched on whole tokens, case-insensitively.
// Keys are stored as their case-folded tokens joined by single spaces.
class Gazetteer {
 public:
  Gazetteer() = default;

  // Throws keysum::Error for a surface without tokens or an invalid etype.
  void add(std::string_view surface, std::string etype);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string> &entries() const {
    return entries_;
  }
  std::size_t max_tokens() const { return max_tokens_; }

  // Tab-separated `surface<TAB>ETYPE` lines; '#' starts a comment line.
  static Gazetteer load(const std::filesystem::path &path);
  static Gazetteer parse(std::istream &in,
                         const std::string &origin = "<stream>");

 private:
  std::map<std::string, std::string> entries_;
  std::size_t max_tokens_ = 0;
};

struct TagContext {
  std::string sample_id;
  EntityRole role = EntityRole::kDocument;
  std::string source = "gazetteer";
};

// Longest match, scanning left to right. Tokens inside one match must be
// separated by whitespace only. Output is sorted and non-overlapping.
std::vector<EntitySpan> gazetteer_tag(std::string_view text,
                                      const Gazetteer &gazetteer,
                                      const TagContext &context = {});

}  // namespace keysum

#endif  // KEYSUM_ENTITY_IO_H_
