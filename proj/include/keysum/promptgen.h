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

#ifndef KEYSUM_PROMPTGEN_H_
#define KEYSUM_PROMPTGEN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "keysum/annotate.h"

namespace keysum {

// Instruction text is assembled from these parts, joined by single spaces:
//   task_definition, entity_emphasis (only when types are selected),
//   conclusion_emphasis, accuracy_clause.
// Placeholders: {types} {open} {close} {conclusion_open} {conclusion_close}.
struct InstructionTemplate {
  std::string task_definition;
  std::string entity_emphasis;
  std::string conclusion_emphasis;
  std::string accuracy_clause;
  // Between instruction and converted document.
  std::string document_separator;
  // Response cue between converted document and summary.
  std::string summary_separator;

  static InstructionTemplate defaults();
  // JSON object with any subset of the fields above; missing fields keep
  // their default. Throws keysum::Error on unknown keys or non-strings.
  static InstructionTemplate from_json(const nlohmann::json &j);
  static InstructionTemplate load(const std::filesystem::path &path);
};

std::string build_instruction(const InstructionTemplate &tmpl,
                              const std::vector<std::string> &selected,
                              const AnnotationTokens &tokens = {});

enum class PromptMode { kTrain, kInfer };

std::string to_string(PromptMode mode);
PromptMode parse_prompt_mode(std::string_view s);

struct PromptRecord {
  std::string sample_id;
  std::string instruction;
  std::string converted_document;
  std::optional<std::string> reference_summary;
  PromptMode mode = PromptMode::kTrain;
  std::string document_separator;
  std::string summary_separator;

  // instruction + document separator + converted document + response cue.
  std::string prompt() const;
  // prompt() followed by the reference summary in train mode.
  std::string render() const;
};

// Throws keysum::Error when mode is train and `summary` is absent, or mode
// is infer and a summary is given.
PromptRecord build_record(const std::string &instruction,
                          const AnnotatedDocument &doc,
                          const std::optional<std::string> &summary,
                          PromptMode mode, const InstructionTemplate &tmpl);

struct EmitOptions {
  std::optional<std::size_t> cap;
  // When set together with cap, keeps a seeded random subset (in input
  // order) instead of the first `cap` records.
  std::optional<std::uint64_t> seed;
};

// Indices of the records kept by `options`, ascending.
std::vector<std::size_t> choose_subset(std::size_t count,
                                       const EmitOptions &options);

// Training JSONL {id, prompt, completion}. Throws keysum::Error if any
// record is not in train mode. Returns the number of lines written.
std::size_t write_training_set(std::ostream &out,
                               const std::vector<PromptRecord> &records,
                               const EmitOptions &options = {});
std::size_t emit_training_set(const std::vector<PromptRecord> &records,
                              const std::filesystem::path &path,
                              const EmitOptions &options = {});

// Inference JSONL {id, prompt}.
void write_inference_set(std::ostream &out,
                         const std::vector<PromptRecord> &records);

// LoRA hyperparameters consumed by the fine-tuning driver.
struct FinetuneConfig {
  int lora_rank = 8;
  int lora_alpha = 32;
  double lora_dropout = 0.05;
  int epochs = 3;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  // Known keys must carry numbers of the right kind; others go to `extra`.
  static FinetuneConfig from_json(const nlohmann::ordered_json &j);
  static FinetuneConfig load(const std::filesystem::path &path);
};

// Applies `overrides` on top of the defaults and writes the result.
FinetuneConfig emit_finetune_config(
    const std::filesystem::path &path,
    const nlohmann::ordered_json &overrides = nlohmann::ordered_json::object());

}  // namespace keysum

#endif  // KEYSUM_PROMPTGEN_H_
