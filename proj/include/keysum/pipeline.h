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

#ifndef KEYSUM_PIPELINE_H_
#define KEYSUM_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "keysum/annotate.h"
#include "keysum/conclusion.h"
#include "keysum/corpus.h"
#include "keysum/entity_io.h"
#include "keysum/evalsuite.h"
#include "keysum/keyselect.h"
#include "keysum/promptgen.h"

// Subcommand implementations. Each command reads its inputs from the paths
// in PipelineConfig and writes a fixed set of files under output_dir; all
// files of one command are committed together or not at all.
namespace keysum::pipeline {

namespace fs = std::filesystem;

struct PipelineConfig {
  fs::path corpus;
  CorpusFormat format = CorpusFormat::kDialogSum;
  std::optional<fs::path> spans;

  SelectionConfig selection;

  bool mark_conclusion = true;
  ScoringMethod conclusion_method = ScoringMethod::kCentrality;
  std::optional<fs::path> sentence_scores;
  std::optional<fs::path> stopwords;

  AnnotationTokens tokens;
  std::optional<fs::path> instruction_template;
  PromptMode mode = PromptMode::kTrain;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> seed;
  nlohmann::ordered_json finetune_overrides = nlohmann::ordered_json::object();

  // score / judge
  std::optional<fs::path> candidates;
  bool score_rouge = true;
  bool score_inclusion = true;
  bool score_length = true;
  InclusionMatch inclusion_match = InclusionMatch::kSurface;
  std::map<std::string, fs::path> candidate_spans;  // system -> span file
  bool rouge_stem = false;
  std::optional<fs::path> rouge_stopwords;
  std::optional<fs::path> judge_template;
  std::optional<fs::path> verdicts;

  std::optional<fs::path> gazetteer;

  fs::path output_dir = "out";
  std::size_t workers = 0;  // 0: take KEYSUM_WORKERS

  // Keys mirror the field names above; unknown keys are rejected. Paths
  // that are relative resolve against `base`.
  static PipelineConfig from_json(const nlohmann::json &j,
                                  const fs::path &base = {});
  static PipelineConfig load(const fs::path &path);
};

// Output file names under output_dir.
inline constexpr char kStatsTsv[] = "entity_stats.tsv";
inline constexpr char kStatsJson[] = "entity_stats.json";
inline constexpr char kSelectedTypes[] = "selected_types.json";
inline constexpr char kConclusions[] = "conclusions.jsonl";
inline constexpr char kAnnotated[] = "annotated.jsonl";
inline constexpr char kTrainSet[] = "train.jsonl";
inline constexpr char kInferSet[] = "infer.jsonl";
inline constexpr char kManifest[] = "manifest.json";
inline constexpr char kFinetuneConfig[] = "finetune_config.json";
inline constexpr char kScoreReport[] = "score_report.json";
inline constexpr char kScoreTable[] = "score_report.txt";
inline constexpr char kJudgePrompts[] = "judge_prompts.jsonl";
inline constexpr char kJudgeReport[] = "judge_report.json";
inline constexpr char kJudgeTable[] = "judge_report.txt";
inline constexpr char kSentences[] = "sentences.jsonl";
inline constexpr char kTaggedSpans[] = "spans.jsonl";
inline constexpr char kValidation[] = "validation.json";

std::vector<EntityTypeStats> cmd_analyze(const PipelineConfig &config);
std::vector<std::string> cmd_select(const PipelineConfig &config);

struct Conclusion {
  std::string sample_id;
  SentenceSpan sentence;
  double score = 0.0;
};
std::vector<Conclusion> cmd_conclude(const PipelineConfig &config);

std::vector<AnnotatedDocument> cmd_annotate(const PipelineConfig &config);

struct BuildResult {
  std::vector<std::string> selected_types;
  std::vector<PromptRecord> records;
  std::size_t written = 0;
};
BuildResult cmd_build(const PipelineConfig &config);

nlohmann::ordered_json cmd_score(const PipelineConfig &config);
std::vector<JudgePrompt> cmd_judge_prompts(const PipelineConfig &config);
VerdictSummary cmd_judge_aggregate(const PipelineConfig &config);

// Sentence boundaries as JSONL {sample_id, sentence_index, start_char,
// end_char, text}, for external extractive scorers.
std::size_t cmd_segment(const PipelineConfig &config);
// Gazetteer tagging of documents and summaries into span JSONL.
std::vector<EntitySpan> cmd_tag(const PipelineConfig &config);
struct ValidateResult {
  std::size_t span_count = 0;
  ValidationReport spans;
  std::size_t score_count = 0;
  std::vector<std::string> score_errors;

  bool ok() const { return spans.ok() && score_errors.empty(); }
  bool clean() const { return spans.clean() && score_errors.empty(); }
};
// Checks the span file and, when configured, the sentence score file
// against the corpus. Writes the findings as JSON.
ValidateResult cmd_validate(const PipelineConfig &config);
FinetuneConfig cmd_finetune_config(const PipelineConfig &config);

}  // namespace keysum::pipeline

#endif  // KEYSUM_PIPELINE_H_
