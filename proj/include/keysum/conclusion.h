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

#ifndef KEYSUM_CONCLUSION_H_
#define KEYSUM_CONCLUSION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "keysum/corpus.h"

namespace keysum {

struct SentenceScore {
  std::string sample_id;
  std::size_t sentence_index = 0;
  double score = 0.0;

  bool operator==(const SentenceScore &) const = default;
};

enum class ScoringMethod { kCentrality, kExternal };

std::string to_string(ScoringMethod method);
ScoringMethod parse_scoring_method(std::string_view s);

// Scores supplied by an outside extractive model, indexed by sample.
class ExternalScores {
 public:
  ExternalScores() = default;
  explicit ExternalScores(const std::vector<SentenceScore> &scores);

  bool contains(const std::string &sample_id) const;

  // Scores for one sample ordered by sentence index. Throws keysum::Error
  // unless the indices are exactly 0..sentence_count-1.
  std::vector<SentenceScore> for_sample(const std::string &sample_id,
                                        std::size_t sentence_count) const;

 private:
  std::map<std::string, std::map<std::size_t, double>> by_sample_;
  std::map<std::string, std::size_t> duplicates_;
};

struct ScoringOptions {
  ScoringMethod method = ScoringMethod::kCentrality;
  // Case-folded tokens ignored by the centrality scorer.
  std::set<std::string> stopwords;
  const ExternalScores *external = nullptr;
};

// Centrality: score(i) = sum over j != i of the cosine similarity between
// the term-frequency vectors of sentences i and j. A document with a single
// sentence scores 1.0. Throws keysum::Error when the document has no
// sentence or external scores are requested but missing.
std::vector<SentenceScore> score_sentences(const Sample &sample,
                                           const ScoringOptions &options = {});

// Sentence index of the maximal score, ties to the smallest index. Throws
// keysum::Error on an empty list.
std::size_t pick_conclusion(const std::vector<SentenceScore> &scores);

// JSONL {sample_id, sentence_index, score}.
std::vector<SentenceScore> load_external_scores(
    const std::filesystem::path &path);
std::vector<SentenceScore> parse_external_scores(
    std::istream &in, const std::string &origin = "<stream>");
void write_scores(std::ostream &out, const std::vector<SentenceScore> &scores);

// Newline-separated, case-folded on load; '#' lines are comments.
std::set<std::string> load_stopwords(const std::filesystem::path &path);

}  // namespace keysum

#endif  // KEYSUM_CONCLUSION_H_
