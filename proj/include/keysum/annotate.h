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

#ifndef KEYSUM_ANNOTATE_H_
#define KEYSUM_ANNOTATE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "keysum/corpus.h"
#include "keysum/entity_io.h"

namespace keysum {

struct AnnotationTokens {
  std::string open = "<";
  std::string close = ">";
  std::string conclusion_open = "<conclusion>";
  std::string conclusion_close = "</conclusion>";
};

struct AnnotationPlan {
  std::string sample_id;
  std::vector<EntitySpan> entity_spans;  // resolved: sorted, disjoint
  std::optional<SentenceSpan> conclusion;
  AnnotationTokens tokens;
};

// A string inserted before code point `offset` of the original text.
struct Insertion {
  std::size_t offset = 0;
  std::string text;

  bool operator==(const Insertion &) const = default;
};

struct AnnotatedDocument {
  std::string sample_id;
  std::string original;
  std::string annotated;
  std::vector<Insertion> insertions;  // in order of appearance
};

// Keeps document-role spans whose etype is selected. Overlaps are resolved
// greedily: longer spans win, then earlier ones. Output is sorted by start.
std::vector<EntitySpan> resolve_spans(const std::vector<EntitySpan> &spans,
                                      const std::vector<std::string> &selected);

// Inserts every marker in one left-to-right pass. At a shared offset the
// order is: entity close, conclusion close, conclusion open, entity open,
// so entities nest inside the conclusion tags. Throws keysum::Error for
// unsorted, overlapping or out-of-range spans, and for an entity that
// crosses the conclusion boundary.
AnnotatedDocument apply_plan(const Sample &sample, const AnnotationPlan &plan);

// Removes the recorded insertions from `annotated`. Throws keysum::Error
// when the annotated text does not carry the recorded insertions.
std::string strip_annotations(const AnnotatedDocument &doc);

// JSONL {id, annotated, insertions: [{offset, text}, ...]}.
void write_annotated(std::ostream &out, const AnnotatedDocument &doc);

}  // namespace keysum

#endif  // KEYSUM_ANNOTATE_H_
