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

#include "keysum/pipeline.h"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <unordered_map>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/parallel.h"
#include "keysum/text.h"

namespace keysum {

std::size_t workers_from_env() {
  const char *env = std::getenv("KEYSUM_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char *end = nullptr;
  const unsigned long n = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || n == 0) return 1;
  return static_cast<std::size_t>(n);
}

namespace pipeline {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace {

fs::path resolve_path(const Json &v, const std::string &key,
                      const fs::path &base) {
  if (!v.is_string()) throw Error("config '" + key + "' must be a path string");
  fs::path p = v.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

bool require_bool(const Json &v, const std::string &key) {
  if (!v.is_boolean()) throw Error("config '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string require_string(const Json &v, const std::string &key) {
  if (!v.is_string()) throw Error("config '" + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t require_unsigned(const Json &v, const std::string &key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw Error("config '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const Json &j, const fs::path &base) {
  if (!j.is_object()) throw Error("pipeline config must be a JSON object");
  PipelineConfig c;
  for (const auto &[key, v] : j.items()) {
    if (key == "corpus") {
      c.corpus = resolve_path(v, key, base);
    } else if (key == "format") {
      c.format = parse_corpus_format(require_string(v, key));
    } else if (key == "spans") {
      c.spans = resolve_path(v, key, base);
    } else if (key == "threshold") {
      if (!v.is_number()) throw Error("config 'threshold' must be a number");
      c.selection.threshold = v.get<double>();
    } else if (key == "explicit_types") {
      if (!v.is_array()) throw Error("config 'explicit_types' must be a list");
      std::vector<std::string> types;
      for (const Json &t : v) types.push_back(require_string(t, key));
      c.selection.explicit_types = std::move(types);
    } else if (key == "mark_conclusion") {
      c.mark_conclusion = require_bool(v, key);
    } else if (key == "conclusion_method") {
      c.conclusion_method = parse_scoring_method(require_string(v, key));
    } else if (key == "sentence_scores") {
      c.sentence_scores = resolve_path(v, key, base);
    } else if (key == "stopwords") {
      c.stopwords = resolve_path(v, key, base);
    } else if (key == "tokens") {
      if (!v.is_object()) throw Error("config 'tokens' must be an object");
      for (const auto &[name, tok] : v.items()) {
        std::string value = require_string(tok, "tokens." + name);
        if (name == "open") c.tokens.open = value;
        else if (name == "close") c.tokens.close = value;
        else if (name == "conclusion_open") c.tokens.conclusion_open = value;
        else if (name == "conclusion_close") c.tokens.conclusion_close = value;
        else throw Error("unknown config key 'tokens." + name + "'");
      }
    } else if (key == "instruction_template") {
      c.instruction_template = resolve_path(v, key, base);
    } else if (key == "mode") {
      c.mode = parse_prompt_mode(require_string(v, key));
    } else if (key == "cap") {
      c.cap = static_cast<std::size_t>(require_unsigned(v, key));
    } else if (key == "seed") {
      c.seed = require_unsigned(v, key);
    } else if (key == "finetune") {
      if (!v.is_object()) throw Error("config 'finetune' must be an object");
      c.finetune_overrides = OrderedJson::parse(v.dump());
    } else if (key == "candidates") {
      c.candidates = resolve_path(v, key, base);
    } else if (key == "score_rouge") {
      c.score_rouge = require_bool(v, key);
    } else if (key == "score_inclusion") {
      c.score_inclusion = require_bool(v, key);
    } else if (key == "score_length") {
      c.score_length = require_bool(v, key);
    } else if (key == "inclusion_match") {
      c.inclusion_match = parse_inclusion_match(require_string(v, key));
    } else if (key == "candidate_spans") {
      if (!v.is_object()) {
        throw Error("config 'candidate_spans' must map system to path");
      }
      for (const auto &[system, p] : v.items()) {
        c.candidate_spans[system] = resolve_path(p, key, base);
      }
    } else if (key == "rouge_stem") {
      c.rouge_stem = require_bool(v, key);
    } else if (key == "rouge_stopwords") {
      c.rouge_stopwords = resolve_path(v, key, base);
    } else if (key == "judge_template") {
      c.judge_template = resolve_path(v, key, base);
    } else if (key == "verdicts") {
      c.verdicts = resolve_path(v, key, base);
    } else if (key == "gazetteer") {
      c.gazetteer = resolve_path(v, key, base);
    } else if (key == "output_dir") {
      c.output_dir = resolve_path(v, key, base);
    } else if (key == "workers") {
      c.workers = static_cast<std::size_t>(require_unsigned(v, key));
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
  c.selection.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path &path) {
  std::ifstream in = jsonl::open_input(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw Error(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

namespace {

std::vector<Sample> corpus_of(const PipelineConfig &config) {
  if (config.corpus.empty()) throw Error("no corpus configured");
  return load_corpus(config.corpus, config.format);
}

std::vector<EntitySpan> spans_of(const PipelineConfig &config) {
  if (!config.spans) throw Error("no span file configured");
  return load_spans(*config.spans);
}

// Loads spans and refuses to continue if any of them contradicts the
// corpus text.
std::vector<EntitySpan> checked_spans(const PipelineConfig &config,
                                      const std::vector<Sample> &samples) {
  std::vector<EntitySpan> spans = spans_of(config);
  const ValidationReport report = validate_corpus_spans(samples, spans);
  if (!report.ok()) {
    const SpanIssue &first = report.errors.front();
    throw Error(config.spans->string() + ": " +
                std::to_string(report.errors.size()) +
                " invalid span(s); first at record " +
                std::to_string(first.span_index + 1) + ": " + first.message);
  }
  return spans;
}

std::map<std::string, std::vector<EntitySpan>> group_by_sample(
    const std::vector<EntitySpan> &spans) {
  std::map<std::string, std::vector<EntitySpan>> out;
  for (const EntitySpan &s : spans) out[s.sample_id].push_back(s);
  return out;
}

OrderedJson selection_json(const SelectionConfig &selection,
                           const std::vector<std::string> &types) {
  OrderedJson j;
  j["threshold"] = selection.threshold;
  j["explicit"] = selection.explicit_types.has_value();
  j["types"] = types;
  return j;
}

std::vector<std::string> selected_types(const PipelineConfig &config,
                                        const std::vector<Sample> &samples,
                                        const std::vector<EntitySpan> &spans) {
  if (config.selection.explicit_types) {
    return select_types({}, config.selection);
  }
  return select_types(compute_type_stats(samples, spans), config.selection);
}

std::vector<Conclusion> conclusions_for(const PipelineConfig &config,
                                        const std::vector<Sample> &samples) {
  ScoringOptions options;
  options.method = config.conclusion_method;
  if (config.stopwords) options.stopwords = load_stopwords(*config.stopwords);
  ExternalScores external;
  if (config.conclusion_method == ScoringMethod::kExternal) {
    if (!config.sentence_scores) {
      throw Error("external conclusion scoring needs a sentence score file");
    }
    external = ExternalScores(load_external_scores(*config.sentence_scores));
    options.external = &external;
  }
  return parallel_map(samples.size(), config.workers, [&](std::size_t i) {
    const Sample &s = samples[i];
    const auto scores = score_sentences(s, options);
    const std::size_t best = pick_conclusion(scores);
    const auto sentences = segment_sentences(s.document, s.domain);
    return Conclusion{s.id, sentences.at(best), scores.at(best).score};
  });
}

struct Annotation {
  std::vector<std::string> types;
  std::vector<AnnotatedDocument> docs;
};

Annotation annotate_corpus(const PipelineConfig &config,
                           const std::vector<Sample> &samples) {
  Annotation out;
  std::vector<EntitySpan> spans;
  if (config.spans) spans = checked_spans(config, samples);
  out.types = selected_types(config, samples, spans);
  const auto by_sample = group_by_sample(spans);

  std::vector<Conclusion> conclusions;
  if (config.mark_conclusion) conclusions = conclusions_for(config, samples);

  out.docs = parallel_map(samples.size(), config.workers, [&](std::size_t i) {
    const Sample &s = samples[i];
    AnnotationPlan plan;
    plan.sample_id = s.id;
    plan.tokens = config.tokens;
    auto it = by_sample.find(s.id);
    if (it != by_sample.end()) plan.entity_spans = resolve_spans(it->second, out.types);
    if (config.mark_conclusion) plan.conclusion = conclusions[i].sentence;
    return apply_plan(s, plan);
  });
  return out;
}

fs::path out_path(const PipelineConfig &config, const char *name) {
  return config.output_dir / name;
}

}  // namespace

std::vector<EntityTypeStats> cmd_analyze(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  const std::vector<EntitySpan> spans = checked_spans(config, samples);
  const std::vector<EntityTypeStats> stats = compute_type_stats(samples, spans);

  jsonl::OutputSet out;
  write_stats_tsv(out.open(out_path(config, kStatsTsv)), stats);
  write_stats_json(out.open(out_path(config, kStatsJson)), stats, samples.size());
  out.commit();
  return stats;
}

std::vector<std::string> cmd_select(const PipelineConfig &config) {
  std::vector<std::string> types;
  if (config.selection.explicit_types) {
    types = select_types({}, config.selection);
  } else {
    const std::vector<Sample> samples = corpus_of(config);
    types = selected_types(config, samples, checked_spans(config, samples));
  }
  jsonl::write_file(out_path(config, kSelectedTypes), [&](std::ostream &os) {
    os << selection_json(config.selection, types).dump(2) << '\n';
  });
  return types;
}

std::vector<Conclusion> cmd_conclude(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  const std::vector<Conclusion> conclusions = conclusions_for(config, samples);
  jsonl::write_file(out_path(config, kConclusions), [&](std::ostream &os) {
    for (std::size_t i = 0; i < conclusions.size(); ++i) {
      const Conclusion &c = conclusions[i];
      OrderedJson j;
      j["sample_id"] = c.sample_id;
      j["sentence_index"] = c.sentence.index;
      j["start_char"] = c.sentence.start_char;
      j["end_char"] = c.sentence.end_char;
      j["score"] = c.score;
      j["text"] = text::slice(samples[i].document, c.sentence.start_char,
                              c.sentence.end_char);
      os << j.dump() << '\n';
    }
  });
  return conclusions;
}

std::vector<AnnotatedDocument> cmd_annotate(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  Annotation a = annotate_corpus(config, samples);
  jsonl::write_file(out_path(config, kAnnotated), [&](std::ostream &os) {
    for (const AnnotatedDocument &d : a.docs) write_annotated(os, d);
  });
  return std::move(a.docs);
}

BuildResult cmd_build(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  const InstructionTemplate tmpl =
      config.instruction_template
          ? InstructionTemplate::load(*config.instruction_template)
          : InstructionTemplate::defaults();
  Annotation a = annotate_corpus(config, samples);

  BuildResult result;
  result.selected_types = a.types;
  const std::string instruction =
      build_instruction(tmpl, a.types, config.tokens);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::optional<std::string> summary;
    if (config.mode == PromptMode::kTrain) {
      if (samples[i].summary.empty()) {
        throw Error("sample '" + samples[i].id +
                    "' has no reference summary; use infer mode");
      }
      summary = samples[i].summary;
    }
    result.records.push_back(
        build_record(instruction, a.docs[i], summary, config.mode, tmpl));
  }

  EmitOptions emit{config.cap, config.seed};
  jsonl::OutputSet out;
  std::ostream &annotated = out.open(out_path(config, kAnnotated));
  for (const AnnotatedDocument &d : a.docs) write_annotated(annotated, d);

  if (config.mode == PromptMode::kTrain) {
    result.written = write_training_set(out.open(out_path(config, kTrainSet)),
                                        result.records, emit);
    const FinetuneConfig ft = FinetuneConfig::from_json(config.finetune_overrides);
    out.open(out_path(config, kFinetuneConfig)) << ft.to_json().dump(2) << '\n';
  } else {
    write_inference_set(out.open(out_path(config, kInferSet)), result.records);
    result.written = result.records.size();
  }

  out.open(out_path(config, kSelectedTypes))
      << selection_json(config.selection, a.types).dump(2) << '\n';

  OrderedJson manifest;
  manifest["mode"] = to_string(config.mode);
  manifest["corpus_format"] = to_string(config.format);
  manifest["samples"] = samples.size();
  manifest["written"] = result.written;
  manifest["selected_types"] = a.types;
  manifest["mark_conclusion"] = config.mark_conclusion;
  manifest["conclusion_method"] = to_string(config.conclusion_method);
  manifest["cap"] = config.cap ? OrderedJson(*config.cap) : OrderedJson(nullptr);
  manifest["sampling"] = (config.cap && config.seed) ? "seeded" : "first";
  manifest["seed"] = config.seed ? OrderedJson(*config.seed) : OrderedJson(nullptr);
  manifest["instruction"] = instruction;
  out.open(out_path(config, kManifest)) << manifest.dump(2) << '\n';

  out.commit();
  return result;
}

OrderedJson cmd_score(const PipelineConfig &config) {
  if (!config.candidates) throw Error("no candidate file configured");
  const std::vector<Sample> samples = corpus_of(config);
  const std::vector<CandidateSummary> candidates =
      load_candidates(*config.candidates);
  check_candidates(samples, candidates);

  std::set<std::string> systems;
  for (const CandidateSummary &c : candidates) systems.insert(c.system);

  std::map<std::string, OrderedJson> sections;
  for (const std::string &s : systems) sections[s]["system"] = s;

  std::vector<SystemRouge> rouge;
  if (config.score_rouge) {
    RougeOptions options;
    options.stem = config.rouge_stem;
    if (config.rouge_stopwords) options.stopwords = load_stopwords(*config.rouge_stopwords);
    rouge = rouge_by_system(samples, candidates, options);
    for (const auto &row : to_json(rouge)) {
      OrderedJson r = row;
      const std::string system = r["system"];
      r.erase("system");
      sections[system]["rouge1"] = r;
    }
  }

  std::vector<InclusionReport> inclusion;
  if (config.score_inclusion) {
    if (!config.spans) {
      throw Error("entity inclusion needs reference spans (or disable it)");
    }
    const std::vector<EntitySpan> spans = checked_spans(config, samples);
    std::map<std::string, std::vector<EntitySpan>> cand_spans;
    if (config.inclusion_match == InclusionMatch::kSpans) {
      for (const auto &[system, path] : config.candidate_spans) {
        cand_spans[system] = load_spans(path);
      }
    }
    inclusion = entity_inclusion(samples, spans, candidates,
                                 config.inclusion_match, cand_spans);
    for (const auto &row : to_json(inclusion)) {
      OrderedJson r = row;
      const std::string system = r["system"];
      r.erase("system");
      r["match"] = to_string(config.inclusion_match);
      sections[system]["entity_inclusion"] = r;
    }
  }

  OrderedJson report;
  report["samples"] = samples.size();
  report["candidates"] = candidates.size();
  report["systems"] = OrderedJson::array();
  for (auto &[system, section] : sections) report["systems"].push_back(section);

  std::optional<LengthSplitReport> lengths;
  if (config.score_length) {
    lengths = length_split(samples, candidates);
    report["length_split"] = to_json(*lengths);
  }

  jsonl::OutputSet out;
  out.open(out_path(config, kScoreReport)) << report.dump(2) << '\n';
  std::ostream &table = out.open(out_path(config, kScoreTable));
  if (config.score_rouge) {
    table << "ROUGE-1\n";
    print_rouge_table(table, rouge);
    table << '\n';
  }
  if (config.score_inclusion) {
    table << "Entity inclusion\n";
    print_inclusion_table(table, inclusion);
    table << '\n';
  }
  if (lengths) {
    table << "Length split\n";
    print_length_table(table, *lengths);
  }
  out.commit();
  return report;
}

std::vector<JudgePrompt> cmd_judge_prompts(const PipelineConfig &config) {
  if (!config.candidates) throw Error("no candidate file configured");
  const std::vector<Sample> samples = corpus_of(config);
  const std::vector<CandidateSummary> candidates =
      load_candidates(*config.candidates);
  const JudgeTemplate tmpl = config.judge_template
                                 ? JudgeTemplate::load(*config.judge_template)
                                 : JudgeTemplate::defaults();
  std::vector<JudgePrompt> prompts = build_judge_prompts(samples, candidates, tmpl);
  jsonl::write_file(out_path(config, kJudgePrompts), [&](std::ostream &os) {
    write_judge_prompts(os, prompts);
  });
  return prompts;
}

VerdictSummary cmd_judge_aggregate(const PipelineConfig &config) {
  if (!config.verdicts) throw Error("no verdict file configured");
  const VerdictSummary summary = aggregate_verdicts(load_verdicts(*config.verdicts));
  jsonl::OutputSet out;
  out.open(out_path(config, kJudgeReport)) << to_json(summary).dump(2) << '\n';
  print_verdict_table(out.open(out_path(config, kJudgeTable)), summary);
  out.commit();
  return summary;
}

std::size_t cmd_segment(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  std::size_t lines = 0;
  jsonl::write_file(out_path(config, kSentences), [&](std::ostream &os) {
    for (const Sample &s : samples) {
      const std::u32string doc = text::to_u32(s.document);
      for (const SentenceSpan &span : segment_sentences(s.document, s.domain)) {
        OrderedJson j;
        j["sample_id"] = s.id;
        j["sentence_index"] = span.index;
        j["start_char"] = span.start_char;
        j["end_char"] = span.end_char;
        j["text"] = text::to_utf8(std::u32string_view(doc).substr(
            span.start_char, span.end_char - span.start_char));
        os << j.dump() << '\n';
        ++lines;
      }
    }
  });
  return lines;
}

std::vector<EntitySpan> cmd_tag(const PipelineConfig &config) {
  if (!config.gazetteer) throw Error("no gazetteer configured");
  const std::vector<Sample> samples = corpus_of(config);
  const Gazetteer gazetteer = Gazetteer::load(*config.gazetteer);
  std::vector<EntitySpan> spans;
  for (const Sample &s : samples) {
    for (EntitySpan &span : gazetteer_tag(
             s.document, gazetteer, {s.id, EntityRole::kDocument, "gazetteer"})) {
      spans.push_back(std::move(span));
    }
    for (EntitySpan &span : gazetteer_tag(
             s.summary, gazetteer, {s.id, EntityRole::kSummary, "gazetteer"})) {
      spans.push_back(std::move(span));
    }
  }
  save_spans(out_path(config, kTaggedSpans), spans);
  return spans;
}

ValidateResult cmd_validate(const PipelineConfig &config) {
  const std::vector<Sample> samples = corpus_of(config);
  ValidateResult result;
  if (config.spans) {
    const std::vector<EntitySpan> spans = spans_of(config);
    result.span_count = spans.size();
    result.spans = validate_corpus_spans(samples, spans);
  }
  if (config.sentence_scores) {
    const auto scores = load_external_scores(*config.sentence_scores);
    result.score_count = scores.size();
    const ExternalScores external(scores);
    std::set<std::string> known;
    for (const Sample &s : samples) {
      known.insert(s.id);
      try {
        external.for_sample(s.id, segment_sentences(s.document, s.domain).size());
      } catch (const Error &e) {
        result.score_errors.push_back(e.what());
      }
    }
    std::set<std::string> reported;
    for (const SentenceScore &s : scores) {
      if (!known.count(s.sample_id) && reported.insert(s.sample_id).second) {
        result.score_errors.push_back("scores reference unknown sample '" +
                                      s.sample_id + "'");
      }
    }
  }

  auto issues = [](const std::vector<SpanIssue> &list) {
    OrderedJson a = OrderedJson::array();
    for (const SpanIssue &i : list) {
      a.push_back({{"record", i.span_index + 1}, {"message", i.message}});
    }
    return a;
  };
  OrderedJson j;
  j["spans"] = {{"count", result.span_count},
                {"errors", issues(result.spans.errors)},
                {"warnings", issues(result.spans.warnings)}};
  j["sentence_scores"] = {{"count", result.score_count},
                          {"errors", result.score_errors}};
  j["ok"] = result.ok();
  jsonl::write_file(out_path(config, kValidation),
                    [&](std::ostream &os) { os << j.dump(2) << '\n'; });
  return result;
}

FinetuneConfig cmd_finetune_config(const PipelineConfig &config) {
  return emit_finetune_config(out_path(config, kFinetuneConfig),
                              config.finetune_overrides);
}

}  // namespace pipeline
}  // namespace keysum
