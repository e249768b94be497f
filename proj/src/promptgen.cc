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

#include "keysum/promptgen.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

#include "keysum/error.h"
#include "keysum/jsonl.h"

namespace keysum {

InstructionTemplate InstructionTemplate::defaults() {
  InstructionTemplate t;
  t.task_definition = "Summarize the following document in a few sentences.";
  t.entity_emphasis =
      "Key entities of type {types} are marked with {open} and {close}; "
      "keep them in the summary.";
  t.conclusion_emphasis =
      "The sentence holding the main point is enclosed in {conclusion_open} "
      "and {conclusion_close}; use it to conclude the summary.";
  t.accuracy_clause =
      "Be accurate: state only facts found in the document and attribute "
      "every statement to the right speaker.";
  t.document_separator = "\n\n### Document:\n";
  t.summary_separator = "\n\n### Summary:\n";
  return t;
}

InstructionTemplate InstructionTemplate::from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw Error("instruction template must be a JSON object");
  InstructionTemplate t = defaults();
  const std::pair<const char *, std::string *> fields[] = {
      {"task_definition", &t.task_definition},
      {"entity_emphasis", &t.entity_emphasis},
      {"conclusion_emphasis", &t.conclusion_emphasis},
      {"accuracy_clause", &t.accuracy_clause},
      {"document_separator", &t.document_separator},
      {"summary_separator", &t.summary_separator},
  };
  for (const auto &[key, value] : j.items()) {
    auto it = std::find_if(std::begin(fields), std::end(fields),
                           [&](const auto &f) { return key == f.first; });
    if (it == std::end(fields)) {
      throw Error("unknown instruction template field '" + key + "'");
    }
    if (!value.is_string()) {
      throw Error("instruction template field '" + key + "' must be a string");
    }
    *it->second = value.get<std::string>();
  }
  return t;
}

InstructionTemplate InstructionTemplate::load(
    const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(path.string() + ": " + e.what());
  }
  return from_json(j);
}

namespace {

void replace_all(std::string &s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

std::string build_instruction(const InstructionTemplate &tmpl,
                              const std::vector<std::string> &selected,
                              const AnnotationTokens &tokens) {
  std::string types;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (i > 0) types += ", ";
    types += selected[i];
  }

  std::vector<std::string> parts;
  parts.push_back(tmpl.task_definition);
  if (!selected.empty()) parts.push_back(tmpl.entity_emphasis);
  parts.push_back(tmpl.conclusion_emphasis);
  parts.push_back(tmpl.accuracy_clause);

  std::string out;
  for (std::string &part : parts) {
    if (part.empty()) continue;
    // {types} last, so type names are never expanded.
    replace_all(part, "{open}", tokens.open);
    replace_all(part, "{close}", tokens.close);
    replace_all(part, "{conclusion_open}", tokens.conclusion_open);
    replace_all(part, "{conclusion_close}", tokens.conclusion_close);
    replace_all(part, "{types}", types);
    if (!out.empty()) out += ' ';
    out += part;
  }
  return out;
}

std::string to_string(PromptMode mode) {
  return mode == PromptMode::kTrain ? "train" : "infer";
}

PromptMode parse_prompt_mode(std::string_view s) {
  if (s == "train") return PromptMode::kTrain;
  if (s == "infer") return PromptMode::kInfer;
  throw Error("unknown prompt mode '" + std::string(s) + "'");
}

std::string PromptRecord::prompt() const {
  return instruction + document_separator + converted_document +
         summary_separator;
}

std::string PromptRecord::render() const {
  std::string out = prompt();
  if (mode == PromptMode::kTrain && reference_summary) {
    out += *reference_summary;
  }
  return out;
}

PromptRecord build_record(const std::string &instruction,
                          const AnnotatedDocument &doc,
                          const std::optional<std::string> &summary,
                          PromptMode mode, const InstructionTemplate &tmpl) {
  if (mode == PromptMode::kTrain && !summary) {
    throw Error("sample '" + doc.sample_id +
                "': train record requires a reference summary");
  }
  if (mode == PromptMode::kInfer && summary) {
    throw Error("sample '" + doc.sample_id +
                "': infer record must not carry a reference summary");
  }
  PromptRecord r;
  r.sample_id = doc.sample_id;
  r.instruction = instruction;
  r.converted_document = doc.annotated;
  r.reference_summary = summary;
  r.mode = mode;
  r.document_separator = tmpl.document_separator;
  r.summary_separator = tmpl.summary_separator;
  return r;
}

std::vector<std::size_t> choose_subset(std::size_t count,
                                       const EmitOptions &options) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  if (!options.cap || *options.cap >= count) return idx;
  const std::size_t keep = *options.cap;
  if (!options.seed) {
    idx.resize(keep);
    return idx;
  }
  // Partial Fisher-Yates on raw mt19937_64 output.
  std::mt19937_64 rng(*options.seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::size_t write_training_set(std::ostream &out,
                               const std::vector<PromptRecord> &records,
                               const EmitOptions &options) {
  for (const PromptRecord &r : records) {
    if (r.mode != PromptMode::kTrain || !r.reference_summary) {
      throw Error("sample '" + r.sample_id +
                  "': training set accepts train-mode records only");
    }
  }
  const std::vector<std::size_t> keep = choose_subset(records.size(), options);
  for (std::size_t i : keep) {
    const PromptRecord &r = records[i];
    jsonl::OrderedJson j;
    j["id"] = r.sample_id;
    j["prompt"] = r.prompt();
    j["completion"] = *r.reference_summary;
    out << j.dump() << '\n';
  }
  return keep.size();
}

std::size_t emit_training_set(const std::vector<PromptRecord> &records,
                              const std::filesystem::path &path,
                              const EmitOptions &options) {
  std::size_t written = 0;
  jsonl::write_file(path, [&](std::ostream &out) {
    written = write_training_set(out, records, options);
  });
  return written;
}

void write_inference_set(std::ostream &out,
                         const std::vector<PromptRecord> &records) {
  for (const PromptRecord &r : records) {
    jsonl::OrderedJson j;
    j["id"] = r.sample_id;
    j["prompt"] = r.prompt();
    out << j.dump() << '\n';
  }
}

nlohmann::ordered_json FinetuneConfig::to_json() const {
  nlohmann::ordered_json j;
  j["lora_rank"] = lora_rank;
  j["lora_alpha"] = lora_alpha;
  j["lora_dropout"] = lora_dropout;
  j["epochs"] = epochs;
  for (const auto &[key, value] : extra.items()) j[key] = value;
  return j;
}

namespace {

int require_int(const nlohmann::ordered_json &v, const std::string &key) {
  if (!v.is_number_integer()) {
    throw Error("finetune config '" + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

FinetuneConfig FinetuneConfig::from_json(const nlohmann::ordered_json &j) {
  if (!j.is_object()) throw Error("finetune config must be a JSON object");
  FinetuneConfig c;
  for (const auto &[key, value] : j.items()) {
    if (key == "lora_rank") {
      c.lora_rank = require_int(value, key);
    } else if (key == "lora_alpha") {
      c.lora_alpha = require_int(value, key);
    } else if (key == "epochs") {
      c.epochs = require_int(value, key);
    } else if (key == "lora_dropout") {
      if (!value.is_number()) {
        throw Error("finetune config 'lora_dropout' must be a number");
      }
      c.lora_dropout = value.get<double>();
    } else {
      c.extra[key] = value;
    }
  }
  return c;
}

FinetuneConfig FinetuneConfig::load(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  try {
    return from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

FinetuneConfig emit_finetune_config(const std::filesystem::path &path,
                                    const nlohmann::ordered_json &overrides) {
  const FinetuneConfig config = FinetuneConfig::from_json(overrides);
  jsonl::write_file(path, [&](std::ostream &out) {
    out << config.to_json().dump(2) << '\n';
  });
  return config;
}

}  // namespace keysum
