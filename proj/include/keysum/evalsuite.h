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

#ifndef KEYSUM_EVALSUITE_H_
#define KEYSUM_EVALSUITE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "keysum/corpus.h"
#include "keysum/entity_io.h"

namespace keysum {

struct CandidateSummary {
  std::string sample_id;
  std::string system;
  std::string text;
};

// JSONL {sample_id, system, text}. Throws on a duplicate (sample, system).
std::vector<CandidateSummary> load_candidates(const std::filesystem::path &path);
std::vector<CandidateSummary> parse_candidates(
    std::istream &in, const std::string &origin = "<stream>");

// Throws keysum::Error naming the first candidate whose sample is unknown.
void check_candidates(const std::vector<Sample> &samples,
                      const std::vector<CandidateSummary> &candidates);

// --- ROUGE-1 -------------------------------------------------------------

struct RougeOptions {
  bool stem = false;
  std::set<std::string> stopwords;  // case-folded
};

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped unigram overlap over case-folded tokens. Empty candidate or
// reference yields all zeros.
RougeScore rouge1(std::string_view candidate, std::string_view reference,
                  const RougeOptions &options = {});
// Same measure over pre-tokenized unigram lists.
RougeScore rouge1_tokens(const std::vector<std::string> &candidate,
                         const std::vector<std::string> &reference);

struct SystemRouge {
  std::string system;
  std::size_t count = 0;
  RougeScore mean;  // macro average over the system's candidates
};

// Scores every candidate against its sample's reference summary.
std::vector<SystemRouge> rouge_by_system(
    const std::vector<Sample> &samples,
    const std::vector<CandidateSummary> &candidates,
    const RougeOptions &options = {});

// --- Entity inclusion ----------------------------------------------------

enum class InclusionMatch { kSurface, kSpans };

std::string to_string(InclusionMatch match);
InclusionMatch parse_inclusion_match(std::string_view s);

struct InclusionCount {
  std::size_t total = 0;
  std::size_t included = 0;

  double ratio() const {
    return total == 0 ? 0.0
                      : static_cast<double>(included) /
                            static_cast<double>(total);
  }
};

struct InclusionReport {
  std::string system;
  std::map<std::string, InclusionCount> per_etype;
  InclusionCount overall;
};

// True when the normalized `needle` occurs in the normalized `haystack`
// with no alphanumeric directly before or after the occurrence.
bool contains_at_token_boundary(std::string_view haystack,
                                std::string_view needle);

// A reference entity is a distinct (etype, normalized surface) among the
// summary-role spans of one sample. Surface mode looks for the entity in
// the candidate text; spans mode looks for a candidate span of the same
// etype and normalized surface in `candidate_spans[system]`. Reports are
// ordered by system name.
std::vector<InclusionReport> entity_inclusion(
    const std::vector<Sample> &samples, const std::vector<EntitySpan> &ref_spans,
    const std::vector<CandidateSummary> &candidates, InclusionMatch match,
    const std::map<std::string, std::vector<EntitySpan>> &candidate_spans = {});

// --- Length split --------------------------------------------------------

struct LengthBucket {
  std::size_t count = 0;
  double mean_doc_len = 0.0;
  double mean_reference_len = 0.0;
  std::map<std::string, double> mean_summary_len;  // per system
};

struct LengthSplitReport {
  double threshold = 0.0;  // mean document length in tokens
  LengthBucket short_bucket;
  LengthBucket long_bucket;
};

// Documents with length <= threshold are short. Every system present in
// `candidates` must cover every sample. Throws on an empty corpus.
LengthSplitReport length_split(const std::vector<Sample> &samples,
                               const std::vector<CandidateSummary> &candidates);

// --- Hallucination judge -------------------------------------------------

struct JudgeTemplate {
  // Placeholders {definition}, {document}, {summary}.
  std::string text;

  static JudgeTemplate defaults();
  static JudgeTemplate load(const std::filesystem::path &path);
};

extern const char kHallucinationDefinition[];

struct JudgePrompt {
  std::string sample_id;
  std::string system;
  std::string prompt;
};

// One prompt per candidate, ordered by (system, sample_id).
std::vector<JudgePrompt> build_judge_prompts(
    const std::vector<Sample> &samples,
    const std::vector<CandidateSummary> &candidates,
    const JudgeTemplate &tmpl = JudgeTemplate::defaults());
// JSONL {sample_id, system, prompt}.
void write_judge_prompts(std::ostream &out,
                         const std::vector<JudgePrompt> &prompts);
void emit_judge_prompts(const std::vector<Sample> &samples,
                        const std::vector<CandidateSummary> &candidates,
                        const JudgeTemplate &tmpl,
                        const std::filesystem::path &path);

struct JudgeVerdict {
  std::string sample_id;
  std::string system;
  long long hallucination_count = 0;
  std::string rationale;
};

// JSONL {sample_id, system, hallucination_count, rationale}.
std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path &path);
std::vector<JudgeVerdict> parse_verdicts(std::istream &in,
                                         const std::string &origin = "<stream>");

struct SystemHallucination {
  std::string system;
  std::size_t samples = 0;
  long long total = 0;
  double mean_per_sample = 0.0;
};

struct VerdictSummary {
  std::vector<SystemHallucination> systems;  // ordered by system
  // sample_id -> system -> count
  std::map<std::string, std::map<std::string, long long>> per_sample;
};

// Throws keysum::Error on a duplicate (sample, system) verdict.
VerdictSummary aggregate_verdicts(const std::vector<JudgeVerdict> &verdicts);

// --- Reporting -----------------------------------------------------------

nlohmann::ordered_json to_json(const std::vector<SystemRouge> &rouge);
nlohmann::ordered_json to_json(const std::vector<InclusionReport> &reports);
nlohmann::ordered_json to_json(const LengthSplitReport &report);
nlohmann::ordered_json to_json(const VerdictSummary &summary);

void print_rouge_table(std::ostream &out, const std::vector<SystemRouge> &rouge);
void print_inclusion_table(std::ostream &out,
                           const std::vector<InclusionReport> &reports);
void print_length_table(std::ostream &out, const LengthSplitReport &report);
void print_verdict_table(std::ostream &out, const VerdictSummary &summary);

}  // namespace keysum

#endif  // KEYSUM_EVALSUITE_H_
