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

#include "keysum/annotate.h"

#include <algorithm>
#include <ostream>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/text.h"

namespace keysum {

std::vector<EntitySpan> resolve_spans(
    const std::vector<EntitySpan> &spans,
    const std::vector<std::string> &selected) {
  std::vector<EntitySpan> candidates;
  for (const EntitySpan &s : spans) {
    if (s.role != EntityRole::kDocument) continue;
    if (std::find(selected.begin(), selected.end(), s.etype) == selected.end()) {
      continue;
    }
    candidates.push_back(s);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const EntitySpan &a, const EntitySpan &b) {
                     if (a.length() != b.length()) return a.length() > b.length();
                     if (a.start_char != b.start_char) {
                       return a.start_char < b.start_char;
                     }
                     return a.etype < b.etype;
                   });

  std::vector<EntitySpan> kept;
  for (EntitySpan &s : candidates) {
    const bool overlaps =
        std::any_of(kept.begin(), kept.end(), [&](const EntitySpan &k) {
          return s.start_char < k.end_char && k.start_char < s.end_char;
        });
    if (!overlaps) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(),
            [](const EntitySpan &a, const EntitySpan &b) {
              return a.start_char < b.start_char;
            });
  return kept;
}

namespace {

// Rank of a marker among those sharing one offset.
enum class Marker { kEntityClose = 0, kConclusionClose, kConclusionOpen, kEntityOpen };

struct Pending {
  std::size_t offset;
  Marker marker;
  const std::string *text;
};

std::string describe(const EntitySpan &s) {
  return s.etype + " span [" + std::to_string(s.start_char) + ", " +
         std::to_string(s.end_char) + ")";
}

}  // namespace

AnnotatedDocument apply_plan(const Sample &sample, const AnnotationPlan &plan) {
  const std::u32string original = text::to_u32(sample.document);
  const std::size_t n = original.size();

  std::vector<Pending> pending;
  std::size_t previous_end = 0;
  for (const EntitySpan &s : plan.entity_spans) {
    if (s.start_char >= s.end_char || s.end_char > n) {
      throw Error("sample '" + sample.id + "': " + describe(s) +
                  " is out of range");
    }
    if (s.start_char < previous_end) {
      throw Error("sample '" + sample.id + "': " + describe(s) +
                  " overlaps or precedes the previous span");
    }
    previous_end = s.end_char;
    if (plan.conclusion) {
      const auto c_start = plan.conclusion->start_char;
      const auto c_end = plan.conclusion->end_char;
      const bool start_inside = s.start_char >= c_start && s.start_char < c_end;
      const bool end_inside = s.end_char > c_start && s.end_char <= c_end;
      if (start_inside != end_inside &&
          (s.start_char < c_end && c_start < s.end_char)) {
        throw Error("sample '" + sample.id + "': " + describe(s) +
                    " crosses the conclusion boundary");
      }
    }
    pending.push_back({s.start_char, Marker::kEntityOpen, &plan.tokens.open});
    pending.push_back({s.end_char, Marker::kEntityClose, &plan.tokens.close});
  }
  if (plan.conclusion) {
    const SentenceSpan &c = *plan.conclusion;
    if (c.start_char >= c.end_char || c.end_char > n) {
      throw Error("sample '" + sample.id + "': conclusion span is out of range");
    }
    pending.push_back(
        {c.start_char, Marker::kConclusionOpen, &plan.tokens.conclusion_open});
    pending.push_back(
        {c.end_char, Marker::kConclusionClose, &plan.tokens.conclusion_close});
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending &a, const Pending &b) {
                     if (a.offset != b.offset) return a.offset < b.offset;
                     return a.marker < b.marker;
                   });

  AnnotatedDocument doc;
  doc.sample_id = sample.id;
  doc.original = sample.document;
  std::u32string annotated;
  annotated.reserve(n + pending.size() * 4);
  std::size_t cursor = 0;
  for (const Pending &p : pending) {
    annotated.append(original, cursor, p.offset - cursor);
    cursor = p.offset;
    annotated += text::to_u32(*p.text);
    doc.insertions.push_back({p.offset, *p.text});
  }
  annotated.append(original, cursor, n - cursor);
  doc.annotated = text::to_utf8(annotated);
  return doc;
}

std::string strip_annotations(const AnnotatedDocument &doc) {
  const std::u32string annotated = text::to_u32(doc.annotated);
  std::u32string original;
  original.reserve(annotated.size());
  std::size_t pos = 0;  // position in `annotated`
  for (const Insertion &ins : doc.insertions) {
    const std::u32string inserted = text::to_u32(ins.text);
    // Original code points consumed so far equal original.size().
    if (ins.offset < original.size()) {
      throw Error("insertions are not sorted by offset");
    }
    const std::size_t copy = ins.offset - original.size();
    if (pos + copy + inserted.size() > annotated.size() ||
        annotated.compare(pos + copy, inserted.size(), inserted) != 0) {
      throw Error("annotated text does not contain insertion '" + ins.text +
                  "' at offset " + std::to_string(ins.offset));
    }
    original.append(annotated, pos, copy);
    pos += copy + inserted.size();
  }
  original.append(annotated, pos, std::u32string::npos);
  return text::to_utf8(original);
}

void write_annotated(std::ostream &out, const AnnotatedDocument &doc) {
  jsonl::OrderedJson j;
  j["id"] = doc.sample_id;
  j["annotated"] = doc.annotated;
  j["insertions"] = jsonl::OrderedJson::array();
  for (const Insertion &ins : doc.insertions) {
    j["insertions"].push_back({{"offset", ins.offset}, {"text", ins.text}});
  }
  out << j.dump() << '\n';
}

}  // namespace keysum
