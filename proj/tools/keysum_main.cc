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

// Command-line front end for the keysum pipeline.
//
// Sample usage:
//   keysum analyze --corpus dev.jsonl --spans dev.spans.jsonl --out reports/
//   keysum build --config build.json --cap 10000
//   keysum score --corpus test.jsonl --spans test.spans.jsonl \
//       --candidates outputs.jsonl --out reports/
//
// Every flag may also be given in the --config JSON file (keys as in
// PipelineConfig); flags win over the file.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "keysum/error.h"
#include "keysum/parallel.h"
#include "keysum/pipeline.h"

namespace {

using keysum::pipeline::PipelineConfig;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string corpus, format, spans;
  double threshold = 0.30;
  std::vector<std::string> types;
  bool no_conclusion = false;
  std::string conclusion_method, sentence_scores, stopwords;
  std::string open_token, close_token, conclusion_open, conclusion_close;
  std::string instruction_template, mode;
  std::size_t cap = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> finetune_set;
  std::string candidates;
  bool no_rouge = false, no_inclusion = false, no_length = false;
  std::string match;
  std::vector<std::string> candidate_spans;
  bool stem = false;
  std::string rouge_stopwords, judge_template, verdicts, gazetteer;
  std::string out;
  std::size_t workers = 0;
};

std::pair<std::string, std::string> split_assignment(const std::string &s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw keysum::Error("expected key=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

PipelineConfig resolve(const CLI::App &app, const Flags &f) {
  PipelineConfig c = f.config.empty() ? PipelineConfig{}
                                      : PipelineConfig::load(f.config);
  auto given = [&](const char *name) { return app.count(name) > 0; };

  if (given("--corpus")) c.corpus = f.corpus;
  if (given("--format")) c.format = keysum::parse_corpus_format(f.format);
  if (given("--spans")) c.spans = fs::path(f.spans);
  if (given("--threshold")) c.selection.threshold = f.threshold;
  if (given("--types")) c.selection.explicit_types = f.types;
  if (given("--no-conclusion")) c.mark_conclusion = false;
  if (given("--conclusion-method")) {
    c.conclusion_method = keysum::parse_scoring_method(f.conclusion_method);
  }
  if (given("--sentence-scores")) c.sentence_scores = fs::path(f.sentence_scores);
  if (given("--stopwords")) c.stopwords = fs::path(f.stopwords);
  if (given("--open-token")) c.tokens.open = f.open_token;
  if (given("--close-token")) c.tokens.close = f.close_token;
  if (given("--conclusion-open")) c.tokens.conclusion_open = f.conclusion_open;
  if (given("--conclusion-close")) c.tokens.conclusion_close = f.conclusion_close;
  if (given("--template")) c.instruction_template = fs::path(f.instruction_template);
  if (given("--mode")) c.mode = keysum::parse_prompt_mode(f.mode);
  if (given("--cap")) c.cap = f.cap;
  if (given("--seed")) c.seed = f.seed;
  for (const std::string &kv : f.finetune_set) {
    auto [key, value] = split_assignment(kv);
    nlohmann::ordered_json parsed;
    try {
      parsed = nlohmann::ordered_json::parse(value);
    } catch (const nlohmann::json::parse_error &) {
      parsed = value;
    }
    c.finetune_overrides[key] = parsed;
  }
  if (given("--candidates")) c.candidates = fs::path(f.candidates);
  if (given("--no-rouge")) c.score_rouge = false;
  if (given("--no-inclusion")) c.score_inclusion = false;
  if (given("--no-length")) c.score_length = false;
  if (given("--match")) c.inclusion_match = keysum::parse_inclusion_match(f.match);
  for (const std::string &kv : f.candidate_spans) {
    auto [system, path] = split_assignment(kv);
    c.candidate_spans[system] = path;
  }
  if (given("--stem")) c.rouge_stem = true;
  if (given("--rouge-stopwords")) c.rouge_stopwords = fs::path(f.rouge_stopwords);
  if (given("--judge-template")) c.judge_template = fs::path(f.judge_template);
  if (given("--verdicts")) c.verdicts = fs::path(f.verdicts);
  if (given("--gazetteer")) c.gazetteer = fs::path(f.gazetteer);
  if (given("--out")) c.output_dir = f.out;
  if (given("--workers")) c.workers = f.workers;
  if (c.workers == 0) c.workers = keysum::workers_from_env();
  c.selection.validate();
  return c;
}

void add_flags(CLI::App &app, Flags &f) {
  app.add_option("--config", f.config, "Pipeline config JSON");
  app.add_option("--corpus", f.corpus, "Corpus JSONL");
  app.add_option("--format", f.format,
                 "dialogsum_jsonl | cnndm_jsonl | generic_jsonl");
  app.add_option("--spans", f.spans, "Entity span JSONL");
  app.add_option("--threshold", f.threshold,
                 "Select types whose summary/document ratio exceeds this");
  app.add_option("--types", f.types, "Explicit entity types (overrides threshold)")
      ->delimiter(',');
  app.add_flag("--no-conclusion", f.no_conclusion, "Do not mark a conclusion");
  app.add_option("--conclusion-method", f.conclusion_method,
                 "centrality | external");
  app.add_option("--sentence-scores", f.sentence_scores,
                 "External sentence score JSONL");
  app.add_option("--stopwords", f.stopwords, "Stopword list for centrality");
  app.add_option("--open-token", f.open_token);
  app.add_option("--close-token", f.close_token);
  app.add_option("--conclusion-open", f.conclusion_open);
  app.add_option("--conclusion-close", f.conclusion_close);
  app.add_option("--template", f.instruction_template,
                 "Instruction template JSON");
  app.add_option("--mode", f.mode, "train | infer");
  app.add_option("--cap", f.cap, "Keep at most this many training records");
  app.add_option("--seed", f.seed,
                 "Pick the capped subset at random with this seed");
  app.add_option("--set", f.finetune_set, "Fine-tune config override key=value");
  app.add_option("--candidates", f.candidates, "Candidate summary JSONL");
  app.add_flag("--no-rouge", f.no_rouge);
  app.add_flag("--no-inclusion", f.no_inclusion);
  app.add_flag("--no-length", f.no_length);
  app.add_option("--match", f.match, "Entity inclusion match: surface | spans");
  app.add_option("--candidate-spans", f.candidate_spans,
                 "system=path span file for --match spans");
  app.add_flag("--stem", f.stem, "Porter-stem tokens for ROUGE");
  app.add_option("--rouge-stopwords", f.rouge_stopwords);
  app.add_option("--judge-template", f.judge_template);
  app.add_option("--verdicts", f.verdicts, "Judge verdict JSONL");
  app.add_option("--gazetteer", f.gazetteer, "surface<TAB>ETYPE dictionary");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--workers", f.workers,
                 "Worker threads (default: KEYSUM_WORKERS or 1)");
}

int run(const std::string &command, const PipelineConfig &c) {
  namespace p = keysum::pipeline;
  const fs::path out = c.output_dir;
  if (command == "analyze") {
    const auto stats = p::cmd_analyze(c);
    keysum::write_stats_tsv(std::cout, stats);
  } else if (command == "select") {
    for (const std::string &t : p::cmd_select(c)) std::cout << t << '\n';
  } else if (command == "conclude") {
    std::cout << p::cmd_conclude(c).size() << " conclusions -> "
              << (out / p::kConclusions).string() << '\n';
  } else if (command == "annotate") {
    std::cout << p::cmd_annotate(c).size() << " documents -> "
              << (out / p::kAnnotated).string() << '\n';
  } else if (command == "build") {
    const auto r = p::cmd_build(c);
    std::cout << r.written << " " << keysum::to_string(c.mode)
              << " records -> " << out.string() << '\n';
  } else if (command == "score") {
    p::cmd_score(c);
    std::ifstream table(out / p::kScoreTable);
    std::cout << table.rdbuf();
  } else if (command == "judge-prompts") {
    std::cout << p::cmd_judge_prompts(c).size() << " prompts -> "
              << (out / p::kJudgePrompts).string() << '\n';
  } else if (command == "judge-aggregate") {
    keysum::print_verdict_table(std::cout, p::cmd_judge_aggregate(c));
  } else if (command == "segment") {
    std::cout << p::cmd_segment(c) << " sentences -> "
              << (out / p::kSentences).string() << '\n';
  } else if (command == "tag") {
    std::cout << p::cmd_tag(c).size() << " spans -> "
              << (out / p::kTaggedSpans).string() << '\n';
  } else if (command == "validate") {
    const auto r = p::cmd_validate(c);
    for (const auto &e : r.spans.errors) {
      std::cerr << "error: span record " << e.span_index + 1 << ": " << e.message << '\n';
    }
    for (const auto &w : r.spans.warnings) {
      std::cerr << "warning: span record " << w.span_index + 1 << ": " << w.message << '\n';
    }
    for (const auto &e : r.score_errors) std::cerr << "error: " << e << '\n';
    std::cout << r.span_count << " spans, " << r.score_count << " scores: "
              << (r.clean() ? "clean" : r.ok() ? "ok with warnings" : "INVALID")
              << '\n';
    return r.ok() ? 0 : 1;
  } else if (command == "finetune-config") {
    const auto ft = p::cmd_finetune_config(c);
    std::cout << ft.to_json().dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Key-element annotated instruction data and summary scoring"};
  app.require_subcommand(1);
  Flags flags;
  add_flags(app, flags);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "Per-type entity presence in documents vs summaries"},
      {"select", "Entity types above the ratio threshold"},
      {"conclude", "Top-1 conclusion sentence per document"},
      {"annotate", "Insert entity and conclusion markers"},
      {"build", "Annotated corpus, prompt JSONL and fine-tune config"},
      {"score", "ROUGE-1, entity inclusion and length split"},
      {"judge-prompts", "Hallucination judge prompts"},
      {"judge-aggregate", "Mean hallucinations per system"},
      {"segment", "Sentence boundaries for external scorers"},
      {"tag", "Gazetteer entity tagging"},
      {"validate", "Check span and score files against the corpus"},
      {"finetune-config", "Write the LoRA hyperparameter file"},
  };
  for (const auto &[name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    const PipelineConfig config = resolve(app, flags);
    return run(app.get_subcommands().front()->get_name(), config);
  } catch (const keysum::Error &e) {
    std::cerr << "keysum: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "keysum: " << e.what() << '\n';
    return 1;
  }
}
