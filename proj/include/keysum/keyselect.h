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

#ifndef KEYSUM_KEYSELECT_H_
#define KEYSUM_KEYSELECT_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "keysum/corpus.h"
#include "keysum/entity_io.h"

namespace keysum {

// Per entity type: how many samples mention it in the document, how many in
// the reference summary, and the ratio summary/document. Counts are sample
// presence, not mention counts.
struct EntityTypeStats {
  std::string etype;
  std::size_t dialogue_count = 0;
  std::size_t summary_count = 0;

  // summary_count / dialogue_count; 0 when dialogue_count is 0.
  double ratio() const;
  // Ratio rounded half-to-even at three decimals, computed exactly from the
  // integer counts, e.g. "0.839".
  std::string ratio_text() const;

  bool operator==(const EntityTypeStats &) const = default;
};

// Rounds num/den half-to-even to `digits` decimals without going through
// floating point. den must be > 0.
std::string format_ratio(std::size_t num, std::size_t den, int digits);

// One row per etype present in any document span, sorted by ratio
// descending (exact rational comparison), then dialogue_count descending,
// then etype. Spans with role=candidate are ignored. Throws keysum::Error
// when a span names a sample that is not in `samples`.
std::vector<EntityTypeStats> compute_type_stats(
    const std::vector<Sample> &samples, const std::vector<EntitySpan> &spans);

struct SelectionConfig {
  double threshold = 0.30;
  std::optional<std::vector<std::string>> explicit_types;

  // Throws keysum::Error unless threshold is in [0, 1].
  void validate() const;
};

// Explicit types are returned verbatim. Otherwise the types whose ratio is
// strictly above the threshold, ratio descending.
std::vector<std::string> select_types(const std::vector<EntityTypeStats> &stats,
                                      const SelectionConfig &config);

// Report columns follow the table layout: type, ratio, dialogue, summary.
void write_stats_tsv(std::ostream &out,
                     const std::vector<EntityTypeStats> &stats);
void write_stats_json(std::ostream &out,
                      const std::vector<EntityTypeStats> &stats,
                      std::size_t corpus_size);

}  // namespace keysum

#endif  // KEYSUM_KEYSELECT_H_
